"""Command-line interface.

Subcommands: solve (harmonic map at a fixed surface), optimize (energy
minimization over a metric family), example (reproduce built-in worked
examples as PASS/FAIL tables), check (internal consistency suite), render
(Poincare-disk SVG figures).

Exit codes: 0 success, 2 bad input file or usage, 3 solver did not converge,
4 domain/geometry error, 5 a check or example criterion failed.
"""

from __future__ import annotations

import argparse
import math
import sys

from .errors import (
    BracketError,
    DomainError,
    GeometryError,
    GraphValidationError,
    NonConvergenceError,
    SchemaError,
)
from .families import hexagon_family_energy, lagrange_solve, minimize_1d
from .hyperboloid import regular_polygon
from .maps import balanced_residual, energy, initial_lifts
from .selfcheck import CheckResult, run_all, summary_table
from .solver import SolverConfig, solve
from .surfaces import build_regular_4g_surface, family, validate_surface
from . import serialize


# --------------------------------------------------------------------------
# solve


def cmd_solve(args) -> int:
    doc = serialize.read_json(args.map)
    surface = graph = None
    inputs = [args.map]
    if args.surface:
        surface = serialize.surface_from_json(serialize.read_json(args.surface))
        inputs.append(args.surface)
    if args.graph:
        graph = serialize.graph_from_json(serialize.read_json(args.graph))
        inputs.append(args.graph)
    m = serialize.map_from_json(doc, surface, graph)
    if args.init != "map":
        m = m.with_lifts(initial_lifts(m.surface, m.graph, args.init, args.seed))

    cfg = SolverConfig(residual_tol=args.tol, max_iters=args.max_iters, seed=args.seed)
    trace = solve(m, cfg)
    final = trace.final_map
    report = balanced_residual(final)

    payload = {
        "manifest": serialize.make_manifest(
            "solve", inputs, {"seed": args.seed, "init": args.init},
            {"residual_tol": args.tol, "max_iters": args.max_iters}),
        "converged": trace.converged,
        "iterations": trace.iterations,
        "energy": energy(final),
        "max_residual": report.max_norm,
        "map": serialize.map_to_json(final),
    }
    serialize.write_artifact(args.out, payload)
    trace_path = args.trace if args.trace else args.out + ".trace.jsonl"
    with open(trace_path, "w", encoding="utf-8") as fh:
        fh.write(trace.jsonl())

    if trace.converged:
        print(f"converged in {trace.iterations} iterations   "
              f"energy {energy(final):.12g}   max residual {report.max_norm:.3e}")
    else:
        print(f"did not converge within {trace.iterations} iterations "
              f"(max residual {report.max_norm:.3e})")
    print(f"wrote {args.out}")
    print(f"wrote {trace_path}")
    return 0 if trace.converged else 3


# --------------------------------------------------------------------------
# optimize


def cmd_optimize(args) -> int:
    if args.family != "hexagon-genus2":
        raise DomainError(
            f"only the 'hexagon-genus2' family has a metric parameter to optimize, got {args.family!r}")
    fam = family("hexagon-genus2", weights=(args.mc, args.md))
    cfg = SolverConfig(residual_tol=args.solver_tol, max_iters=args.max_iters, seed=args.seed)
    theta, value = minimize_1d(fam, (args.bracket[0], args.bracket[1]), tol=args.tol, cfg=cfg)
    sol = lagrange_solve(args.mc / args.md)

    print(f"minimizer s* = {theta:.8f}   energy E* = {value:.10g}")
    print(f"stationarity cross-check: s = {sol.s:.8f}  |difference| = {abs(theta - sol.s):.3e}")
    print(f"  closure residual {abs(sol.constraint_residual):.3e}   "
          f"stationarity residual {abs(sol.stationarity_residual):.3e}")

    if args.out:
        payload = {
            "manifest": serialize.make_manifest(
                "optimize", [],
                {"seed": args.seed},
                {"search_tol": args.tol, "residual_tol": args.solver_tol,
                 "max_iters": args.max_iters}),
            "family": args.family,
            "weights": {"m_c": args.mc, "m_d": args.md},
            "bracket": [args.bracket[0], args.bracket[1]],
            "theta_star": theta,
            "energy_star": value,
            "stationarity": {
                "s": sol.s, "t": sol.t,
                "constraint_residual": sol.constraint_residual,
                "stationarity_residual": sol.stationarity_residual,
            },
            "agreement": abs(theta - sol.s),
        }
        serialize.write_artifact(args.out, payload)
        print(f"wrote {args.out}")
    return 0


# --------------------------------------------------------------------------
# example


def _pfcheck(name: str, value: float, bound: float) -> CheckResult:
    return CheckResult(name, bool(value <= bound), f"{value:.3e} (tol {bound:.0e})")


def _example_hexagon_genus2(args) -> list[CheckResult]:
    checks = []
    sol = lagrange_solve(args.mc / args.md)
    print(f"stationary seam s* = {sol.s:.6f}   partner length t* = {sol.t:.6f}")
    checks.append(_pfcheck("closure constraint at s*", abs(sol.constraint_residual), 1e-10))
    checks.append(_pfcheck("stationarity condition at s*", abs(sol.stationarity_residual), 1e-10))
    if args.mc == args.md:
        checks.append(_pfcheck("equal weights give s* = log(2+sqrt(3))",
                               abs(sol.s - math.log(2.0 + math.sqrt(3.0))), 1e-9))
    fam = family("hexagon-genus2", weights=(args.mc, args.md))
    theta, value = minimize_1d(fam, (0.5 * sol.s, 2.0 * sol.s), tol=1e-7,
                               cfg=SolverConfig(residual_tol=1e-9))
    print(f"energy-search minimizer = {theta:.6f}   minimum energy = {value:.6f}")
    checks.append(_pfcheck("energy search agrees with stationarity solve",
                           abs(theta - sol.s), 1e-5))
    closed = hexagon_family_energy(sol.s, args.mc, args.md)
    checks.append(_pfcheck("minimum energy matches closed form",
                           abs(value - closed) / closed, 1e-6))
    return checks


def _example_regular_4g(genus: int) -> list[CheckResult]:
    checks = []
    surface = build_regular_4g_surface(genus)
    report = validate_surface(surface)
    worst = max(report.relator_defects) if report.relator_defects else math.inf
    relator_ok = not any(code == "RELATOR" for code, _ in report.issues)
    checks.append(CheckResult(f"4g-gon relators close up (genus {genus})",
                              relator_ok, f"worst defect {worst:.3e} (norm-scaled gate)"))
    checks.append(_pfcheck("polygon area matches Gauss-Bonnet",
                           abs(report.area - report.area_expected), 1e-7))
    if genus == 2:
        expected = 2.0 * math.acosh(1.0 + math.sqrt(2.0))
        checks.append(_pfcheck("octagon generator translation length",
                               abs(surface.generators[0].translation_length() - expected), 1e-8))
    _s, _g, ref = family("regular-4g", genus=genus).build()
    rep = balanced_residual(ref)
    checks.append(_pfcheck("center bouquet map is balanced", rep.max_norm, 1e-10))
    geo = regular_polygon(4 * genus, math.pi / (2 * genus))
    closed = 2 * genus * (2.0 * geo.inradius) ** 2
    print(f"bouquet map energy = {energy(ref):.6f}   loops have length {2 * geo.inradius:.6f}")
    checks.append(_pfcheck("bouquet energy matches closed form",
                           abs(energy(ref) - closed) / closed, 1e-12))
    return checks


def _example_klein(args) -> list[CheckResult]:
    from .surfaces import build_klein_quartic

    checks = []
    surface = build_klein_quartic()
    report = validate_surface(surface)
    worst = max(report.relator_defects)
    checks.append(_pfcheck("14-gon relators close up", worst, 1e-8))
    checks.append(_pfcheck("polygon area is 8*pi", abs(report.area - 8.0 * math.pi), 1e-8))
    checks.append(_pfcheck("both corner cycles have angle sum 2*pi",
                           max(abs(a - 2.0 * math.pi) for a in report.angle_sums), 1e-8))
    checks.append(_pfcheck("corner cycle count is 2", abs(len(report.angle_sums) - 2), 0))
    return checks


def cmd_example(args) -> int:
    if args.name == "hexagon-genus2":
        checks = _example_hexagon_genus2(args)
    elif args.name == "regular-4g":
        checks = _example_regular_4g(args.genus)
    elif args.name == "genus-g":
        if args.genus < 2:
            raise DomainError(f"genus must be at least 2, got {args.genus}")
        checks = _example_regular_4g(args.genus)
    else:
        checks = _example_klein(args)
    print(summary_table(checks))
    return 0 if all(c.ok for c in checks) else 5


# --------------------------------------------------------------------------
# check / render


def cmd_check(args) -> int:
    results = run_all(fast=not args.thorough)
    print(summary_table(results))
    return 0 if all(r.ok for r in results) else 5


def cmd_render(args) -> int:
    from .render import render_map_svg, render_surface_svg

    if args.map:
        doc = serialize.read_json(args.map)
        if isinstance(doc, dict) and "vertex_lifts" not in doc and "map" in doc:
            doc = doc["map"]  # solve artifacts nest the map payload
        m = serialize.map_from_json(doc)
        svg = render_map_svg(m, translate_depth=args.depth, size=args.size)
    else:
        surface = serialize.surface_from_json(serialize.read_json(args.surface))
        svg = render_surface_svg(surface, translate_depth=args.depth, size=args.size)
    with open(args.out, "w", encoding="utf-8") as fh:
        fh.write(svg)
    print(f"wrote {args.out}")
    return 0


# --------------------------------------------------------------------------
# parser


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="graphuniform",
        description="Discrete harmonic maps from weighted graphs into hyperbolic surfaces.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", help="solve the balanced-map equations at a fixed surface")
    p.add_argument("--map", required=True, help="map JSON (lifts + deck words [+ surface/graph])")
    p.add_argument("--surface", help="surface JSON overriding the one embedded in the map")
    p.add_argument("--graph", help="graph JSON overriding the one embedded in the map")
    p.add_argument("--init", choices=["map", "barycenter", "random"], default="map",
                   help="starting lifts: from the map file, or reseeded")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--tol", type=float, default=1e-9, help="max residual norm for convergence")
    p.add_argument("--max-iters", type=int, default=10000)
    p.add_argument("--out", required=True, help="output artifact path")
    p.add_argument("--trace", help="iteration trace path (default: OUT.trace.jsonl)")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("optimize", help="minimize harmonic energy over a metric family")
    p.add_argument("--family", default="hexagon-genus2")
    p.add_argument("--mc", type=float, default=1.0, help="weight of c-class edges")
    p.add_argument("--md", type=float, default=1.0, help="weight of d-class edges")
    p.add_argument("--bracket", type=float, nargs=2, default=[0.5, 3.0], metavar=("LO", "HI"))
    p.add_argument("--tol", type=float, default=1e-8, help="parameter search tolerance")
    p.add_argument("--solver-tol", type=float, default=1e-9)
    p.add_argument("--max-iters", type=int, default=10000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", help="optional output artifact path")
    p.set_defaults(func=cmd_optimize)

    p = sub.add_parser("example", help="reproduce a built-in worked example")
    p.add_argument("name", choices=["regular-4g", "hexagon-genus2", "genus-g", "klein"])
    p.add_argument("--genus", type=int, default=2)
    p.add_argument("--mc", type=float, default=1.0)
    p.add_argument("--md", type=float, default=1.0)
    p.set_defaults(func=cmd_example)

    p = sub.add_parser("check", help="run the internal consistency checks")
    p.add_argument("--thorough", action="store_true", help="higher iteration budgets")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("render", help="draw a map or surface into an SVG")
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--map", help="map JSON with embedded surface and graph")
    group.add_argument("--surface", help="surface JSON (polygon only)")
    p.add_argument("--out", required=True)
    p.add_argument("--depth", type=int, default=1, help="translate shells to draw")
    p.add_argument("--size", type=int, default=640, help="image size in pixels")
    p.set_defaults(func=cmd_render)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except SchemaError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except NonConvergenceError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except (DomainError, GraphValidationError, GeometryError, BracketError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 4


if __name__ == "__main__":
    sys.exit(main())
