"""Discrete harmonic maps from weighted graphs into closed hyperbolic surfaces.

Vertices of a finite weighted graph are placed on a hyperbolic surface (given
by Fuchsian side-pairing generators), edges become geodesic segments in a
fixed homotopy class, and the energy sum(weight * length^2) is minimized --
first over vertex positions at a fixed metric, then over one-parameter
families of metrics.
"""

__version__ = "0.1.0"

from .errors import (
    BracketError,
    DegenerateEdgeError,
    DomainError,
    GeometryError,
    GraphValidationError,
    NonConvergenceError,
    NotHyperbolicError,
    SchemaError,
    TangencyError,
)
from .graphs import WeightedGraph, bouquet, cycle_with_doubled_edges, hexagon_tiling_genus, triangle_tiling
from .hyperboloid import HPoint, HTangent, Isometry
from .maps import MarkedMap, balanced_residual, energy, gauge_transform, initial_lifts, rebase_vertex
from .solver import SolverConfig, SolveTrace, gauge_fix, hessian_fd, solve, uniqueness_probe
from .surfaces import (
    MetricFamily,
    SurfaceModel,
    build_genus2_hexagon_surface,
    build_klein_quartic,
    build_regular_4g_surface,
    build_triangle_surface,
    family,
    validate_surface,
)
from .families import (
    EnergyEvaluator,
    LagrangeSolution,
    energy_of_parameter,
    hexagon_family_energy,
    lagrange_solve,
    minimize_1d,
    properness_probe,
    sample_curve,
    triangle_energy,
)
from .variations import (
    VertexVariation,
    first_variation,
    hessian_consistency,
    jacobi_solve,
    second_variation_geodesic,
)

__all__ = [
    "__version__",
    "BracketError", "DegenerateEdgeError", "DomainError", "GeometryError",
    "GraphValidationError", "NonConvergenceError", "NotHyperbolicError",
    "SchemaError", "TangencyError",
    "WeightedGraph", "bouquet", "cycle_with_doubled_edges", "hexagon_tiling_genus", "triangle_tiling",
    "HPoint", "HTangent", "Isometry",
    "MarkedMap", "balanced_residual", "energy", "gauge_transform", "initial_lifts", "rebase_vertex",
    "SolverConfig", "SolveTrace", "gauge_fix", "hessian_fd", "solve", "uniqueness_probe",
    "MetricFamily", "SurfaceModel", "build_genus2_hexagon_surface", "build_klein_quartic",
    "build_regular_4g_surface", "build_triangle_surface", "family", "validate_surface",
    "EnergyEvaluator", "LagrangeSolution", "energy_of_parameter", "hexagon_family_energy",
    "lagrange_solve", "minimize_1d", "properness_probe", "sample_curve", "triangle_energy",
    "VertexVariation", "first_variation", "hessian_consistency", "jacobi_solve",
    "second_variation_geodesic",
]
