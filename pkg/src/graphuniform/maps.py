"""Piecewise-geodesic maps from a weighted graph into a hyperbolic surface.

A map is stored through an equivariant lift: one hyperboloid point per graph
vertex plus, for every oriented edge, a word in the surface generators (the
deck transformation).  The lifted edge e runs from lift(o(e)) to
deck_e * lift(t(e)); the words are combinatorial data encoding the homotopy
class and are never recomputed from floats.  A gauge isometry can be applied
on top without touching the words, so gauge moves keep the class exact.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError, GeometryError, GraphValidationError
from .graphs import WeightedGraph
from .hyperboloid import (
    HPoint,
    HTangent,
    Isometry,
    J_MATRIX,
    dist_arr,
    log_arr,
)
from .surfaces import SurfaceModel

_REVERSAL_TOL = 1e-10


def _inverse_word(word: tuple[int, ...]) -> tuple[int, ...]:
    return tuple(-w for w in reversed(word))


@dataclass(frozen=True, eq=False)
class MarkedMap:
    """Vertex lifts + per-half-edge deck words (+ an overall gauge isometry).

    The effective deck matrix of half-edge e is gauge * word(e) * gauge^-1;
    matrices are cached at construction, words are the source of truth.
    """

    surface: SurfaceModel
    graph: WeightedGraph
    vertex_lifts: tuple[HPoint, ...]
    deck_words: tuple[tuple[int, ...], ...]
    gauge: Isometry = field(default_factory=Isometry.identity)

    def __post_init__(self):
        g = self.graph
        if len(self.vertex_lifts) != g.vertex_count:
            raise GraphValidationError(
                "LIFT_COUNT", f"{len(self.vertex_lifts)} lifts for {g.vertex_count} vertices")
        if len(self.deck_words) != g.half_edge_count:
            raise GraphValidationError(
                "DECK_COUNT", f"{len(self.deck_words)} deck words for {g.half_edge_count} half-edges")
        object.__setattr__(self, "deck_words", tuple(tuple(w) for w in self.deck_words))

        ginv = self.gauge.inverse().matrix
        mats = []
        for word in self.deck_words:
            mats.append(self.gauge.matrix @ self.surface.word_matrix(word) @ ginv)
        mats = np.array(mats)
        lifts = np.array([p.coords for p in self.vertex_lifts])
        object.__setattr__(self, "_deck_mats", mats)
        object.__setattr__(self, "_lift_arr", lifts)

        for e in range(g.half_edge_count):
            r = g.reversals[e]
            if e < r:
                back = J_MATRIX @ mats[e].T @ J_MATRIX
                # product round-off grows with the square of the matrix norm
                scale = (1.0 + float(np.max(np.abs(back)))) ** 2
                defect = float(np.max(np.abs(mats[r] - back)))
                if defect > _REVERSAL_TOL * scale:
                    raise GeometryError(
                        f"deck word of half-edge {r} is not inverse to half-edge {e} (defect {defect:.3e})")

    @staticmethod
    def from_unoriented_words(
        surface: SurfaceModel,
        graph: WeightedGraph,
        lifts: tuple[HPoint, ...],
        words: tuple[tuple[int, ...], ...],
        gauge: Isometry | None = None,
    ) -> "MarkedMap":
        """Build from one deck word per unoriented edge (in unoriented_edges()
        order); the reversed half-edges get the inverse words."""
        unoriented = graph.unoriented_edges()
        if len(words) != len(unoriented):
            raise GraphValidationError(
                "DECK_COUNT", f"{len(words)} deck words for {len(unoriented)} unoriented edges")
        full: list[tuple[int, ...]] = [()] * graph.half_edge_count
        for (e, _u, _v, _w, _cls), word in zip(unoriented, words):
            full[e] = tuple(word)
            full[graph.reversals[e]] = _inverse_word(tuple(word))
        return MarkedMap(surface, graph, tuple(lifts), tuple(full),
                         gauge if gauge is not None else Isometry.identity())

    # -- accessors ---------------------------------------------------------

    def lift_array(self) -> np.ndarray:
        return self._lift_arr.copy()

    def deck_matrix(self, e: int) -> np.ndarray:
        return self._deck_mats[e]

    def edge_segment(self, e: int) -> tuple[HPoint, HPoint]:
        """Endpoints of the lifted half-edge e."""
        p = self.vertex_lifts[self.graph.origins[e]]
        q = self._deck_mats[e] @ self._lift_arr[self.graph.terminus(e)]
        return p, HPoint(q)

    def edge_tangent(self, e: int) -> HTangent:
        """Initial tangent T_e(0) of the lifted half-edge (norm = edge length)."""
        p, q = self.edge_segment(e)
        return HTangent(p, log_arr(p.coords, q.coords))

    def edge_length(self, e: int) -> float:
        p, q = self.edge_segment(e)
        return float(dist_arr(p.coords, q.coords))

    def with_lifts(self, lifts) -> "MarkedMap":
        """Same class and gauge, new vertex positions."""
        pts = tuple(p if isinstance(p, HPoint) else HPoint(np.asarray(p, dtype=float)) for p in lifts)
        return MarkedMap(self.surface, self.graph, pts, self.deck_words, self.gauge)


def energy(m: MarkedMap) -> float:
    """Sum over unoriented edges of weight * (lifted edge length)^2."""
    total = 0.0
    g = m.graph
    x = m._lift_arr
    for e in range(g.half_edge_count):
        if e < g.reversals[e]:
            p = x[g.origins[e]]
            q = m._deck_mats[e] @ x[g.terminus(e)]
            total += g.weights[e] * float(dist_arr(p, q)) ** 2
    return total


@dataclass(frozen=True)
class BalancedReport:
    residuals: tuple[HTangent, ...]
    max_norm: float
    rms_norm: float

    def is_harmonic(self, tol: float = 1e-9) -> bool:
        return self.max_norm <= tol


def balanced_residual(m: MarkedMap) -> BalancedReport:
    """Weighted sum of outgoing edge tangents at every vertex.

    Zero residual everywhere is the harmonicity criterion; the residual is
    also half the negative Riemannian energy gradient at each vertex lift.
    """
    g = m.graph
    x = m._lift_arr
    acc = np.zeros((g.vertex_count, 3))
    for e in range(g.half_edge_count):
        o = g.origins[e]
        q = m._deck_mats[e] @ x[g.terminus(e)]
        acc[o] += g.weights[e] * log_arr(x[o], q)
    residuals = tuple(HTangent(m.vertex_lifts[v], acc[v]) for v in range(g.vertex_count))
    norms = [r.norm for r in residuals]
    max_norm = max(norms)
    rms = math.sqrt(sum(n * n for n in norms) / len(norms))
    return BalancedReport(residuals, max_norm, rms)


def gauge_transform(m: MarkedMap, g: Isometry) -> MarkedMap:
    """Move every lift by g and conjugate the deck matrices; words unchanged."""
    lifts = tuple(g.apply(p) for p in m.vertex_lifts)
    return MarkedMap(m.surface, m.graph, lifts, m.deck_words, g @ m.gauge)


def rebase_vertex(m: MarkedMap, v: int, word: tuple[int, ...]) -> MarkedMap:
    """Replace the lift of v by its translate under `word`, fixing up the deck
    words of incident edges so the map is unchanged.  Energy is invariant."""
    if not 0 <= v < m.graph.vertex_count:
        raise DomainError(f"no vertex {v}")
    word = tuple(word)
    gamma = m.gauge.matrix @ m.surface.word_matrix(word) @ m.gauge.inverse().matrix
    lifts = list(m.vertex_lifts)
    lifts[v] = HPoint(gamma @ lifts[v].coords)
    inv = _inverse_word(word)
    new_words = []
    for e in range(m.graph.half_edge_count):
        w = m.deck_words[e]
        if m.graph.origins[e] == v:
            w = word + w
        if m.graph.terminus(e) == v:
            w = w + inv
        new_words.append(w)
    return MarkedMap(m.surface, m.graph, tuple(lifts), tuple(new_words), m.gauge)


def initial_lifts(
    surface: SurfaceModel, graph: WeightedGraph, mode: str = "barycenter", seed: int = 0
) -> tuple[HPoint, ...]:
    """Seed positions inside the fundamental polygon.

    "barycenter" puts every vertex at the normalized average of the polygon
    corners; "random" draws a Dirichlet-weighted corner combination per
    vertex from the given seed.
    """
    if surface.polygon is not None:
        corners = np.array([p.coords for p in surface.polygon])
    elif surface.tiles:
        corners = np.array([p.coords for p in surface.tiles[0]])
    else:
        raise DomainError("surface has no polygon to seed lifts in")
    if mode == "barycenter":
        center = corners.mean(axis=0)
        return tuple(HPoint(center) for _ in range(graph.vertex_count))
    if mode == "random":
        rng = np.random.default_rng(seed)
        out = []
        for _ in range(graph.vertex_count):
            w = rng.dirichlet(np.ones(len(corners)))
            out.append(HPoint(w @ corners))
        return tuple(out)
    raise DomainError(f"unknown lift seeding mode {mode!r}")
