"""Independent numeric constructions used as oracles by the tests.

Everything here works on raw numpy arrays with its own bisection loops and
trigonometry, deliberately avoiding the package's closed forms, so agreement
is evidence rather than tautology.
"""

import math

import numpy as np


def mdot(u, w):
    return -u[0] * w[0] + u[1] * w[1] + u[2] * w[2]


def raw_dist(p, q):
    return math.acosh(max(1.0, -mdot(p, q)))


def rot_z(phi):
    c, s = math.cos(phi), math.sin(phi)
    return np.array([[1.0, 0.0, 0.0], [0.0, c, -s], [0.0, s, c]])


def regular_polygon_inradius_oracle(n: int, interior_angle: float) -> float:
    """Inradius of the regular n-gon by bisection on the corner angle.

    The side at inradius r, orthogonal to the x-axis, has pole
    (sinh r, cosh r, 0); the adjacent side is its rotation by 2*pi/n.  The
    two sides meet at the corner with cos(angle) = -<pole1, pole2> once the
    poles are oriented consistently; bisection matches that to the target
    interior angle.  Larger r spreads the sides apart and shrinks the angle.
    """

    def corner_cos(r: float) -> float:
        pole = np.array([math.sinh(r), math.cosh(r), 0.0])
        other = rot_z(2.0 * math.pi / n) @ pole
        return -mdot(pole, other)

    lo, hi = 1e-6, 20.0
    target = math.cos(interior_angle)
    # corner_cos crosses the target from below as r grows
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if mid == lo or mid == hi:
            break
        if corner_cos(mid) < target:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def geodesic_intersection(pole1, pole2):
    """Timelike intersection point of two geodesics given by their poles."""
    c = np.cross(pole1, pole2)
    v = np.array([-c[0], c[1], c[2]])
    norm2 = mdot(v, v)
    if norm2 >= 0:
        raise ValueError("geodesics do not intersect")
    v = v / math.sqrt(-norm2)
    return v if v[0] > 0 else -v


def pole_through(p, q):
    c = np.cross(p, q)
    v = np.array([-c[0], c[1], c[2]])
    return v / math.sqrt(mdot(v, v))


def triangle_sides_oracle(p: int, q: int, r: int):
    """Side lengths of the (pi/p, pi/q, pi/r) triangle by shooting.

    Corner A sits at the origin with its angle pi/p spanned by the rays at
    directions 0 and pi/p; corner B slides along the first ray.  For a trial
    |AB| = c the side through B making angle pi/q with BA is intersected with
    the second ray, and the angle at that intersection C is compared with
    pi/r; the angle at C shrinks as c grows.  Returns (|BC|, |CA|, |AB|),
    i.e. each side opposite the corner with the matching angle.
    """
    alpha, beta, gamma = math.pi / p, math.pi / q, math.pi / r
    ray_a0 = np.array([0.0, 0.0, -1.0])  # pole of the x-axis geodesic
    ray_a1 = rot_z(alpha) @ ray_a0

    def corner_b(c):
        return np.array([math.cosh(c), math.sinh(c), 0.0])

    def side_bc_pole(c):
        # at B the x-axis arrives with direction u = (sinh c, cosh c, 0);
        # rotate the outgoing side from the BA direction (-u) by -beta so the
        # interior angle at B, opening toward positive x2, equals beta
        b = corner_b(c)
        u = np.array([math.sinh(c), math.cosh(c), 0.0])
        n = np.array([0.0, 0.0, 1.0])  # unit normal at B along x3
        d = math.cos(math.pi - beta) * u + math.sin(math.pi - beta) * n
        # pole of the geodesic through b with direction d
        cc = np.cross(b, d)
        v = np.array([-cc[0], cc[1], cc[2]])
        return v / math.sqrt(mdot(v, v))

    def angle_at_c(c):
        inter = geodesic_intersection(ray_a1, side_bc_pole(c))
        # interior angle between the two sides at C
        u1 = pole_through(inter, np.array([1.0, 0.0, 0.0]))
        u2 = pole_through(inter, corner_b(c))
        cosang = abs(mdot(u1, u2))
        return math.acos(max(-1.0, min(1.0, cosang)))

    lo, hi = 1e-3, 20.0
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if mid == lo or mid == hi:
            break
        try:
            ang = angle_at_c(mid)
        except ValueError:
            hi = mid  # overshot: side BC no longer meets the ray
            continue
        if ang > gamma:
            lo = mid
        else:
            hi = mid
    c = 0.5 * (lo + hi)
    b_pt = corner_b(c)
    c_pt = geodesic_intersection(ray_a1, side_bc_pole(c))
    a_pt = np.array([1.0, 0.0, 0.0])
    return raw_dist(b_pt, c_pt), raw_dist(c_pt, a_pt), raw_dist(a_pt, b_pt)


def triangle_area_from_sides(a, b, c):
    """Angle defect pi - (A+B+C) with angles from the hyperbolic law of cosines."""
    def angle(opposite, s1, s2):
        num = math.cosh(s1) * math.cosh(s2) - math.cosh(opposite)
        den = math.sinh(s1) * math.sinh(s2)
        return math.acos(max(-1.0, min(1.0, num / den)))

    return math.pi - (angle(a, b, c) + angle(b, c, a) + angle(c, a, b))


def polygon_area_fan_oracle(corner_coords) -> float:
    """Area of a convex polygon as a fan of triangles from corner 0, each
    measured by its angle defect with law-of-cosines angles."""
    pts = [np.asarray(getattr(p, "coords", p), dtype=float) for p in corner_coords]
    total = 0.0
    for k in range(1, len(pts) - 1):
        a = raw_dist(pts[k], pts[k + 1])
        b = raw_dist(pts[0], pts[k + 1])
        c = raw_dist(pts[0], pts[k])
        total += triangle_area_from_sides(a, b, c)
    return total
