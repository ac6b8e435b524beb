"""Poincare-disk SVG figures: fundamental polygon, its depth-1 translates,
and the graph image.

Hyperboloid points project to the disk by (x1, x2) / (1 + x0); geodesics are
drawn as sampled polylines of the true geodesic (no arc fitting), which keeps
the renderer dependency-free and exact at any zoom that matters here.
"""

from __future__ import annotations

import numpy as np

from .errors import DomainError
from .hyperboloid import exp_arr, log_arr
from .maps import MarkedMap
from .surfaces import SurfaceModel


def disk_projection(coords: np.ndarray) -> np.ndarray:
    """(..., 3) hyperboloid coordinates -> (..., 2) unit-disk coordinates."""
    return coords[..., 1:] / (1.0 + coords[..., :1])


def _geodesic_points(p: np.ndarray, q: np.ndarray, segments: int = 24) -> np.ndarray:
    v = log_arr(p, q)
    ts = np.linspace(0.0, 1.0, segments + 1)
    return exp_arr(p[None, :], ts[:, None] * v[None, :])


class _Svg:
    def __init__(self, size: int):
        self.size = size
        self.parts: list[str] = []

    def _xy(self, disk: np.ndarray) -> tuple[float, float]:
        half = self.size / 2.0
        return half + disk[0] * half * 0.95, half - disk[1] * half * 0.95

    def polyline(self, disk_pts: np.ndarray, color: str, width: float, closed: bool = False):
        pts = " ".join("%.5f,%.5f" % self._xy(d) for d in disk_pts)
        tag = "polygon" if closed else "polyline"
        self.parts.append(
            f'<{tag} points="{pts}" fill="none" stroke="{color}" stroke-width="{width}"/>')

    def circle(self, disk: np.ndarray, radius: float, color: str):
        x, y = self._xy(disk)
        self.parts.append(f'<circle cx="{x:.5f}" cy="{y:.5f}" r="{radius}" fill="{color}"/>')

    def text(self) -> str:
        half = self.size / 2.0
        header = (
            f'<svg xmlns="http://www.w3.org/2000/svg" width="{self.size}" height="{self.size}" '
            f'viewBox="0 0 {self.size} {self.size}">\n'
            f'<rect width="{self.size}" height="{self.size}" fill="white"/>\n'
            f'<circle cx="{half}" cy="{half}" r="{half * 0.95}" fill="none" '
            f'stroke="#888888" stroke-width="1"/>\n'
        )
        return header + "\n".join(self.parts) + "\n</svg>\n"


def _polygon_outline(corners: np.ndarray, segments: int = 24) -> np.ndarray:
    pieces = []
    n = len(corners)
    for k in range(n):
        pieces.append(_geodesic_points(corners[k], corners[(k + 1) % n], segments)[:-1])
    return disk_projection(np.concatenate(pieces))


def render_map_svg(m: MarkedMap, translate_depth: int = 1, size: int = 640) -> str:
    """Figure of a marked map: polygon (black), its generator translates up to
    the given depth (gray), lifted graph edges (crimson) and vertices (dots)."""
    if translate_depth < 0 or translate_depth > 2:
        raise DomainError(f"translate depth must be 0, 1, or 2, got {translate_depth}")
    svg = _Svg(size)
    surface = m.surface

    if surface.polygon is not None:
        corners = np.array([p.coords for p in surface.polygon])
    elif surface.tiles:
        corners = None
        for tri in surface.tiles:
            svg.polyline(_polygon_outline(np.array([p.coords for p in tri]), 12),
                         "#bbbbbb", 0.8, closed=True)
    else:
        corners = None

    if corners is not None:
        mats = [np.eye(3)]
        frontier = [np.eye(3)]
        for _ in range(translate_depth):
            new_frontier = []
            for base in frontier:
                for k in range(len(surface.generators)):
                    for sign in (1, -1):
                        new_frontier.append(base @ surface.generator_matrix(sign * (k + 1)))
            frontier = new_frontier
            mats.extend(new_frontier)
        for mat in mats[1:]:
            svg.polyline(_polygon_outline((mat @ corners.T).T), "#cccccc", 0.8, closed=True)
        svg.polyline(_polygon_outline(corners), "#000000", 1.6, closed=True)

    g = m.graph
    x = m.lift_array()
    for e in range(g.half_edge_count):
        if e < g.reversals[e]:
            p = x[g.origins[e]]
            q = m.deck_matrix(e) @ x[g.terminus(e)]
            svg.polyline(disk_projection(_geodesic_points(p, q)), "crimson", 1.4)
    for v in range(g.vertex_count):
        svg.circle(disk_projection(x[v]), 3.0, "crimson")
    return svg.text()


def render_surface_svg(surface: SurfaceModel, translate_depth: int = 1, size: int = 640) -> str:
    """Figure of just the fundamental polygon and its translates."""
    if surface.polygon is None and not surface.tiles:
        raise DomainError("surface has neither polygon nor tiles to draw")
    svg = _Svg(size)
    if surface.polygon is not None:
        corners = np.array([p.coords for p in surface.polygon])
        mats = [np.eye(3)]
        if translate_depth >= 1:
            for k in range(len(surface.generators)):
                for sign in (1, -1):
                    mats.append(surface.generator_matrix(sign * (k + 1)))
        for mat in mats[1:]:
            svg.polyline(_polygon_outline((mat @ corners.T).T), "#cccccc", 0.8, closed=True)
        svg.polyline(_polygon_outline(corners), "#000000", 1.6, closed=True)
    else:
        for tri in surface.tiles:
            svg.polyline(_polygon_outline(np.array([p.coords for p in tri]), 12),
                         "#555555", 0.8, closed=True)
    return svg.text()
