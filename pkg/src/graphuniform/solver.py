"""Harmonic-map solver: energy descent over vertex lifts with fixed deck words.

The descent step moves every vertex toward the weighted barycenter of its
deck-translated neighbors (the balanced-condition residual divided by the
vertex weight), with Armijo backtracking so accepted steps strictly decrease
energy.  Convergence is declared on the residual itself, the harmonicity
criterion, not on energy stalling.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, GraphValidationError
from .graphs import WeightedGraph
from .hyperboloid import (
    HPoint,
    Isometry,
    dist_arr,
    exp_arr,
    log_arr,
    minkowski_dot,
    tangent_basis,
)
from .maps import MarkedMap, energy, gauge_transform
from .surfaces import SurfaceModel


def worker_count() -> int:
    """Parallelism cap from GU_THREADS (default 1 = sequential)."""
    raw = os.environ.get("GU_THREADS", "1")
    try:
        n = int(raw)
    except ValueError:
        raise DomainError(f"GU_THREADS must be an integer, got {raw!r}")
    return max(1, n)


@dataclass(frozen=True)
class SolverConfig:
    residual_tol: float = 1e-9
    max_iters: int = 10000
    tau: float = 1.0
    armijo_slope: float = 1e-4
    armijo_factor: float = 0.5
    seed: int = 0

    def __post_init__(self):
        if not self.residual_tol > 0:
            raise DomainError(f"residual_tol must be positive, got {self.residual_tol!r}")
        if not 0.0 < self.tau <= 1.0:
            raise DomainError(f"step damping must lie in (0, 1], got {self.tau!r}")
        if self.max_iters < 0:
            raise DomainError(f"max_iters must be nonnegative, got {self.max_iters!r}")


@dataclass(frozen=True)
class SolveTrace:
    energies: tuple[float, ...]
    residuals: tuple[float, ...]
    final_map: MarkedMap
    converged: bool
    iterations: int

    def jsonl(self) -> str:
        """One JSON object per iteration: iteration, energy, residual."""
        lines = []
        for i, (e, r) in enumerate(zip(self.energies, self.residuals)):
            lines.append('{"iteration": %d, "energy": %.17g, "residual": %.17g}' % (i, e, r))
        return "\n".join(lines) + "\n"


class _Workspace:
    """Raw-array view of a MarkedMap for the inner loop."""

    def __init__(self, m: MarkedMap):
        g = m.graph
        self.origins = np.array(g.origins)
        self.termini = np.array([g.terminus(e) for e in range(g.half_edge_count)])
        self.weights = np.array(g.weights)
        self.mats = m._deck_mats
        even = [e for e in range(g.half_edge_count) if e < g.reversals[e]]
        self.even = np.array(even)
        self.vertex_weight = np.zeros(g.vertex_count)
        np.add.at(self.vertex_weight, self.origins, self.weights)
        if np.any(self.vertex_weight == 0.0):
            raise GraphValidationError("ISOLATED_VERTEX", "solver needs every vertex to carry an edge")

    def energy(self, x: np.ndarray) -> float:
        e = self.even
        p = x[self.origins[e]]
        q = np.einsum("eij,ej->ei", self.mats[e], x[self.termini[e]])
        return float(np.sum(self.weights[e] * dist_arr(p, q) ** 2))

    def residual(self, x: np.ndarray) -> np.ndarray:
        q = np.einsum("eij,ej->ei", self.mats, x[self.termini])
        tangents = log_arr(x[self.origins], q)
        r = np.zeros_like(x)
        np.add.at(r, self.origins, self.weights[:, None] * tangents)
        return r


def _residual_norms(r: np.ndarray) -> np.ndarray:
    return np.sqrt(np.maximum(0.0, minkowski_dot(r, r)))


def solve(m0: MarkedMap, cfg: SolverConfig | None = None) -> SolveTrace:
    """Minimize energy over vertex lifts; deck words are never touched.

    Returns the trace whether or not the residual tolerance was reached
    within max_iters; `converged` says which.
    """
    cfg = cfg or SolverConfig()
    ws = _Workspace(m0)
    x = m0.lift_array()
    energies: list[float] = []
    residual_trace: list[float] = []
    steps = 0
    converged = False

    e_cur = ws.energy(x)
    while True:
        r = ws.residual(x)
        norms = _residual_norms(r)
        max_res = float(np.max(norms))
        energies.append(e_cur)
        residual_trace.append(max_res)
        if max_res <= cfg.residual_tol:
            converged = True
            break
        if steps >= cfg.max_iters:
            break

        delta = r / ws.vertex_weight[:, None]
        slope = 2.0 * float(np.sum(norms * norms / ws.vertex_weight))
        # once the predicted decrease drops under the float resolution of the
        # energy, the Armijo comparison is rounding noise; switch the
        # acceptance test to strict residual decrease, which stays measurable
        floor = 16.0 * np.finfo(float).eps * max(1.0, abs(e_cur))
        tau = cfg.tau
        accepted = False
        for _ in range(80):
            x_new = exp_arr(x, tau * delta)
            e_new = ws.energy(x_new)
            if e_new <= e_cur - cfg.armijo_slope * tau * slope:
                accepted = True
                break
            if cfg.armijo_slope * tau * slope <= floor:
                new_max = float(np.max(_residual_norms(ws.residual(x_new))))
                if new_max < max_res:
                    accepted = True
                    break
            tau *= cfg.armijo_factor
        if not accepted:
            break  # at the numerical floor of both energy and residual
        x = x_new
        e_cur = e_new
        steps += 1

    final = m0.with_lifts(x)
    return SolveTrace(tuple(energies), tuple(residual_trace), final, converged, steps)


def gauge_fix(m: MarkedMap) -> MarkedMap:
    """Canonical gauge: first vertex lift at (1,0,0), first edge tangent along
    the positive x1-axis."""
    origin = HPoint.origin()
    p0 = m.vertex_lifts[0]
    g1 = Isometry.from_frames(p0, tangent_basis(p0)[0], origin, tangent_basis(origin)[0])
    moved = gauge_transform(m, g1)
    t0 = moved.edge_tangent(0)
    if t0.norm < 1e-12:
        return moved
    angle = math.atan2(t0.vec[2], t0.vec[1])
    return gauge_transform(moved, Isometry.rotation(origin, -angle))


def fd_gradient(m: MarkedMap, h: float = 1e-5) -> np.ndarray:
    """Central finite-difference energy gradient in the canonical orthonormal
    tangent coordinates (2 per vertex)."""
    ws = _Workspace(m)
    x = m.lift_array()
    bases = [tangent_basis(p) for p in m.vertex_lifts]
    n = len(bases)
    grad = np.zeros(2 * n)
    for v in range(n):
        for j in range(2):
            step = np.zeros_like(x)
            step[v] = h * bases[v][j].vec
            e_plus = ws.energy(exp_arr(x, step))
            e_minus = ws.energy(exp_arr(x, -step))
            grad[2 * v + j] = (e_plus - e_minus) / (2.0 * h)
    return grad


def hessian_fd(m: MarkedMap, h: float = 1e-4) -> np.ndarray:
    """Central finite-difference Hessian of energy in the same coordinates as
    fd_gradient; symmetrized.  Meaningful as a second-order object at a
    harmonic map, where the coordinate choice drops out."""
    if not 1e-6 <= h <= 1e-3:
        raise DomainError(f"finite-difference step {h!r} outside [1e-6, 1e-3]")
    ws = _Workspace(m)
    x = m.lift_array()
    bases = [tangent_basis(p) for p in m.vertex_lifts]
    dim = 2 * len(bases)

    def offset_energy(coe: np.ndarray) -> float:
        step = np.zeros_like(x)
        for v in range(len(bases)):
            step[v] = coe[2 * v] * bases[v][0].vec + coe[2 * v + 1] * bases[v][1].vec
        return ws.energy(exp_arr(x, step))

    e0 = ws.energy(x)
    hess = np.zeros((dim, dim))
    for i in range(dim):
        ei = np.zeros(dim)
        ei[i] = h
        hess[i, i] = (offset_energy(ei) - 2.0 * e0 + offset_energy(-ei)) / (h * h)
        for j in range(i + 1, dim):
            ej = np.zeros(dim)
            ej[j] = h
            val = (
                offset_energy(ei + ej) - offset_energy(ei - ej)
                - offset_energy(-ei + ej) + offset_energy(-ei - ej)
            ) / (4.0 * h * h)
            hess[i, j] = hess[j, i] = val
    return 0.5 * (hess + hess.T)


@dataclass(frozen=True)
class UniquenessReport:
    n_starts: int
    converged: tuple[bool, ...]
    energies: tuple[float, ...]
    max_gauge_deviation: float
    max_raw_deviation: float
    degenerate: bool
    message: str

    @property
    def ok(self) -> bool:
        return all(self.converged) and not self.degenerate


def _image_is_one_dimensional(m: MarkedMap) -> bool:
    """True when at every vertex the outgoing edge tangents span at most a
    line -- the map's image lies in a single geodesic (or a point), which is
    exactly the degenerate case excluded by the uniqueness hypothesis."""
    g = m.graph
    for v in range(g.vertex_count):
        rows = []
        b1, b2 = tangent_basis(m.vertex_lifts[v])
        for e in range(g.half_edge_count):
            if g.origins[e] == v:
                t = m.edge_tangent(e)
                rows.append([
                    float(minkowski_dot(t.vec, b1.vec)),
                    float(minkowski_dot(t.vec, b2.vec)),
                ])
        sv = np.linalg.svd(np.array(rows), compute_uv=False)
        if sv[0] > 1e-9 and sv[-1] > 1e-6 * sv[0]:
            return False
    return True


def uniqueness_probe(
    surface: SurfaceModel,
    graph: WeightedGraph,
    deck_words: tuple[tuple[int, ...], ...],
    n_starts: int,
    cfg: SolverConfig | None = None,
) -> UniquenessReport:
    """Solve from n_starts seeded-random initial lifts and compare the results
    after gauge fixing.  Distinct limits (or a one-dimensional image) mean the
    uniqueness hypothesis fails for this homotopy class."""
    if n_starts < 2:
        raise DomainError(f"uniqueness probe needs at least 2 starts, got {n_starts}")
    cfg = cfg or SolverConfig()
    from .maps import initial_lifts

    def run(i: int) -> SolveTrace:
        lifts = initial_lifts(surface, graph, "random", seed=cfg.seed + i)
        return solve(MarkedMap.from_unoriented_words(surface, graph, lifts, deck_words), cfg)

    workers = min(worker_count(), n_starts)
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            traces = list(pool.map(run, range(n_starts)))
    else:
        traces = [run(i) for i in range(n_starts)]

    fixed = [gauge_fix(t.final_map) for t in traces]

    def max_pair_dev(maps) -> float:
        worst = 0.0
        for i in range(len(maps)):
            xi = maps[i]._lift_arr
            for j in range(i + 1, len(maps)):
                worst = max(worst, float(np.max(dist_arr(xi, maps[j]._lift_arr))))
        return worst

    degenerate = any(t.converged and _image_is_one_dimensional(t.final_map) for t in traces)
    message = "uniqueness hypothesis violated" if degenerate else "all starts agree"
    return UniquenessReport(
        n_starts,
        tuple(t.converged for t in traces),
        tuple(energy(t.final_map) for t in traces),
        max_pair_dev(fixed),
        max_pair_dev([t.final_map for t in traces]),
        degenerate,
        message,
    )
