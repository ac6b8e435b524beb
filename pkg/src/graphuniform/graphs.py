"""Finite weighted multigraphs with oriented half-edges.

Half-edge k has an origin vertex and a reversal partner; loops and parallel
edges are first-class.  Weights are stored per half-edge and must agree on
reversal pairs.  Each edge also carries a geometric class label ("c"/"d" for
pants tilings, "1"/"2"/"3" for triangle sides, "loop" for bouquets) so
periodic weights can be assigned per class.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import DomainError, GraphValidationError


@dataclass(frozen=True, eq=False)
class WeightedGraph:
    vertex_count: int
    origins: tuple[int, ...]
    reversals: tuple[int, ...]
    weights: tuple[float, ...]
    classes: tuple[str, ...]

    def __post_init__(self):
        n = len(self.origins)
        if not (len(self.reversals) == len(self.weights) == len(self.classes) == n):
            raise GraphValidationError("FIELD_LENGTH_MISMATCH", "half-edge arrays differ in length")
        if self.vertex_count <= 0:
            raise GraphValidationError("NO_VERTICES", "graph needs at least one vertex")

    @staticmethod
    def from_edges(vertex_count: int, edges: list[tuple[int, int, float, str]]) -> "WeightedGraph":
        """Build from unoriented (u, v, weight, class) tuples; halves 2k and 2k+1."""
        origins, reversals, weights, classes = [], [], [], []
        for k, (u, v, w, cls) in enumerate(edges):
            if not w > 0:
                raise GraphValidationError(
                    "WEIGHT_NOT_POSITIVE", f"edge {k} has weight {w!r}"
                )
            origins += [u, v]
            reversals += [2 * k + 1, 2 * k]
            weights += [float(w), float(w)]
            classes += [cls, cls]
        return WeightedGraph(vertex_count, tuple(origins), tuple(reversals),
                             tuple(weights), tuple(classes))

    @property
    def half_edge_count(self) -> int:
        return len(self.origins)

    @property
    def edge_count(self) -> int:
        """Unoriented edge count."""
        return len(self.origins) // 2

    def terminus(self, e: int) -> int:
        return self.origins[self.reversals[e]]

    def star(self, v: int) -> "EdgeStar":
        return EdgeStar(v, tuple(e for e in range(self.half_edge_count) if self.origins[e] == v))

    def stars(self) -> list["EdgeStar"]:
        by_vertex: list[list[int]] = [[] for _ in range(self.vertex_count)]
        for e, o in enumerate(self.origins):
            by_vertex[o].append(e)
        return [EdgeStar(v, tuple(es)) for v, es in enumerate(by_vertex)]

    def degree(self, v: int) -> int:
        return sum(1 for o in self.origins if o == v)

    def unoriented_edges(self) -> list[tuple[int, int, int, float, str]]:
        """(half_edge, origin, terminus, weight, class) for one half per reversal pair."""
        out = []
        for e in range(self.half_edge_count):
            if e < self.reversals[e]:
                out.append((e, self.origins[e], self.terminus(e), self.weights[e], self.classes[e]))
        return out

    def is_connected(self) -> bool:
        if self.vertex_count == 1:
            return True
        seen = {0}
        frontier = [0]
        while frontier:
            v = frontier.pop()
            for e in range(self.half_edge_count):
                if self.origins[e] == v:
                    w = self.terminus(e)
                    if w not in seen:
                        seen.add(w)
                        frontier.append(w)
        return len(seen) == self.vertex_count


@dataclass(frozen=True)
class EdgeStar:
    vertex: int
    edges: tuple[int, ...]


@dataclass(frozen=True)
class GraphValidationReport:
    issues: tuple[tuple[str, str], ...]
    degree_sequence: tuple[int, ...]

    @property
    def ok(self) -> bool:
        return not self.issues


def validate(g: WeightedGraph, allow_disconnected: bool = False) -> GraphValidationReport:
    """Structural checks; every violated invariant yields a coded issue."""
    issues: list[tuple[str, str]] = []
    n = g.half_edge_count
    for e in range(n):
        if not 0 <= g.origins[e] < g.vertex_count:
            issues.append(("ORIGIN_RANGE", f"half-edge {e} originates at unknown vertex {g.origins[e]}"))
    for e in range(n):
        r = g.reversals[e]
        if not 0 <= r < n:
            issues.append(("REVERSAL_RANGE", f"half-edge {e} reverses to unknown half-edge {r}"))
        elif g.reversals[r] != e:
            issues.append(("REVERSAL_NOT_INVOLUTION", f"reversal of {e} is {r} but reversal of {r} is {g.reversals[r]}"))
        elif r == e:
            issues.append(("REVERSAL_FIXED_POINT", f"half-edge {e} is its own reversal"))
    for e in range(n):
        if not g.weights[e] > 0:
            issues.append(("WEIGHT_NOT_POSITIVE", f"half-edge {e} has weight {g.weights[e]!r}"))
        r = g.reversals[e]
        if 0 <= r < n and e < r:
            if g.weights[e] != g.weights[r]:
                issues.append(("WEIGHT_NOT_SYMMETRIC", f"edge ({e},{r}) has weights {g.weights[e]!r} != {g.weights[r]!r}"))
            if g.classes[e] != g.classes[r]:
                issues.append(("CLASS_NOT_SYMMETRIC", f"edge ({e},{r}) has classes {g.classes[e]!r} != {g.classes[r]!r}"))
    if not issues and not allow_disconnected and not g.is_connected():
        issues.append(("NOT_CONNECTED", "graph is not connected"))
    degrees = tuple(g.degree(v) for v in range(g.vertex_count))
    if any(d == 0 for d in degrees):
        issues.append(("ISOLATED_VERTEX", "graph has a vertex of degree zero"))
    return GraphValidationReport(tuple(issues), degrees)


# --------------------------------------------------------------------------
# builders


def bouquet(k: int, weight: float = 1.0) -> WeightedGraph:
    """One vertex with k self-loops."""
    if k < 1:
        raise DomainError(f"bouquet needs at least one loop, got {k}")
    return WeightedGraph.from_edges(1, [(0, 0, weight, "loop") for _ in range(k)])


def cycle_with_doubled_edges(length: int, m_c: float, m_d: float) -> WeightedGraph:
    """Cycle v0..v_{length-1} with every step doubled; step i has class c (even) or d (odd).

    Edge order: the `length` primary steps first, then the `length` secondary
    copies.  This is the 1-skeleton of the four-hexagon genus-2 tiling when
    length = 6.
    """
    def cls(i):
        return "c" if i % 2 == 0 else "d"

    prim = [(i, (i + 1) % length, m_c if cls(i) == "c" else m_d, cls(i)) for i in range(length)]
    sec = [(i, (i + 1) % length, m_c if cls(i) == "c" else m_d, cls(i)) for i in range(length)]
    return WeightedGraph.from_edges(length, prim + sec)


def hexagon_tiling_genus(g: int, m_c: float = 1.0, m_d: float = 1.0) -> WeightedGraph:
    """1-skeleton of the genus-g surface glued from 4(g-1) right-angled hexagons.

    2(g-1) pairs of pants, each two hexagons sewn along three seams (class d);
    pants are paired into genus-1 blocks through two of their boundary circles
    and the blocks are chained through the third (class c arcs).  Result:
    6(g-1) vertices of degree 4, 6(g-1) edges of each class.
    """
    if g < 2:
        raise DomainError(f"hexagon tiling needs genus >= 2, got {g}")
    if g == 2:
        return cycle_with_doubled_edges(6, m_c, m_d)

    blocks = g - 1
    # pants-vertex (block, pants, corner) -> union-find over circle gluings
    def pv(i, p, j):
        return (i * 2 + p) * 6 + j

    parent = list(range(blocks * 12))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(x, y):
        parent[find(x)] = find(y)

    gluings = []  # (pants-vertex pair identifications, arc endpoints)
    for i in range(blocks):
        for k in (0, 2):
            gluings.append(((i, 0, k), (i, 1, k)))
        gluings.append(((i, 1, 4), ((i + 1) % blocks, 0, 4)))
    for (i1, p1, k1), (i2, p2, k2) in gluings:
        union(pv(i1, p1, k1), pv(i2, p2, k2))
        union(pv(i1, p1, k1 + 1), pv(i2, p2, k2 + 1))

    labels: dict[int, int] = {}
    def vid(i, p, j):
        root = find(pv(i, p, j))
        if root not in labels:
            labels[root] = len(labels)
        return labels[root]

    edges: list[tuple[int, int, float, str]] = []
    for i in range(blocks):
        for p in (0, 1):
            for k in (1, 3, 5):
                edges.append((vid(i, p, k), vid(i, p, (k + 1) % 6), m_d, "d"))
    for (i1, p1, k1), _ in gluings:
        for _h in (0, 1):
            edges.append((vid(i1, p1, k1), vid(i1, p1, k1 + 1), m_c, "c"))
    return WeightedGraph.from_edges(6 * blocks, edges)


def triangle_tiling(p: int, q: int, r: int, copies: int,
                    weights: tuple[float, float, float] = (1.0, 1.0, 1.0)) -> WeightedGraph:
    """Edge classes of a tiling by `copies` triangles with angles pi/p, pi/q, pi/r.

    Vertices 0, 1, 2 are the corner classes with angles pi/p, pi/q, pi/r; each
    mirror-pair of triangles contributes one edge of each class, where class
    "i" is the side opposite corner i.
    """
    if 1.0 / p + 1.0 / q + 1.0 / r >= 1.0:
        raise DomainError(f"triangle signature ({p},{q},{r}) is not hyperbolic")
    if copies < 2 or copies % 2 != 0:
        raise DomainError(f"copies must be a positive even count of triangles, got {copies}")
    edges: list[tuple[int, int, float, str]] = []
    for _ in range(copies // 2):
        edges.append((1, 2, weights[0], "1"))
        edges.append((0, 2, weights[1], "2"))
        edges.append((0, 1, weights[2], "3"))
    return WeightedGraph.from_edges(3, edges)
