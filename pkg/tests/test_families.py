import math

import numpy as np
import pytest

import oracles
from graphuniform.errors import BracketError, DomainError, NonConvergenceError
from graphuniform.families import (
    EnergyEvaluator,
    energy_of_parameter,
    hexagon_family_energy,
    lagrange_solve,
    minimize_1d,
    properness_probe,
    sample_curve,
    stationarity_ratio,
    triangle_energy,
)
from graphuniform.hyperboloid import hexagon_partner_length
from graphuniform.solver import SolverConfig
from graphuniform.surfaces import family

THETA_STAR = math.log(2.0 + math.sqrt(3.0))


def test_closed_form_energy_matches_solver():
    fam = family("hexagon-genus2")
    cfg = SolverConfig(residual_tol=1e-10, max_iters=2000)
    for s in (0.6, 1.0, 1.7, 2.5):
        solved = energy_of_parameter(fam, s, cfg)
        closed = hexagon_family_energy(s, 1.0, 1.0)
        assert abs(solved - closed) < 1e-7 * (1.0 + closed)


def test_closed_form_energy_with_asymmetric_weights():
    m_c, m_d = 2.0, 0.5
    fam = family("hexagon-genus2", weights=(m_c, m_d))
    cfg = SolverConfig(residual_tol=1e-10, max_iters=2000)
    for s in (0.8, 1.4):
        solved = energy_of_parameter(fam, s, cfg)
        t = hexagon_partner_length(s)
        closed = 6.0 * (m_d * s * s + m_c * t * t)
        assert abs(hexagon_family_energy(s, m_c, m_d) - closed) < 1e-12 * closed
        assert abs(solved - closed) < 1e-7 * (1.0 + closed)


def test_stationarity_ratio_strictly_increasing():
    grid = np.linspace(0.05, 8.0, 120)
    vals = [stationarity_ratio(float(s)) for s in grid]
    assert all(b > a for a, b in zip(vals, vals[1:]))


def test_lagrange_solve_equal_weights_closed_form():
    sol = lagrange_solve(1.0)
    assert abs(sol.s - THETA_STAR) < 1e-10
    assert abs(sol.t - THETA_STAR) < 1e-10
    assert sol.constraint_residual < 1e-12
    assert sol.stationarity_residual < 1e-12


def test_lagrange_solve_various_ratios():
    for ratio in (0.25, 1.0, 4.0):
        sol = lagrange_solve(ratio)
        assert abs(math.sinh(sol.s / 2.0) * math.sinh(sol.t / 2.0) - 0.5) < 1e-12
        # stationarity: s tanh(s/2) = ratio * t tanh(t/2)
        lhs = sol.s * math.tanh(sol.s / 2.0)
        rhs = ratio * sol.t * math.tanh(sol.t / 2.0)
        assert abs(lhs - rhs) < 1e-10 * (1.0 + abs(lhs))


def test_lagrange_symmetry_under_ratio_inversion():
    a = lagrange_solve(3.0)
    b = lagrange_solve(1.0 / 3.0)
    assert abs(a.s - b.t) < 1e-9
    assert abs(a.t - b.s) < 1e-9


def test_minimizer_matches_lagrange_solution():
    fam = family("hexagon-genus2")
    cfg = SolverConfig(residual_tol=1e-9, max_iters=2000)
    theta, value = minimize_1d(fam, (0.5, 3.0), tol=1e-8, cfg=cfg)
    assert abs(theta - THETA_STAR) < 1e-6
    assert abs(value - hexagon_family_energy(THETA_STAR, 1.0, 1.0)) < 1e-6 * (1.0 + value)


def test_minimizer_first_order_condition():
    # the closed-form energy has zero slope at the searched minimizer
    fam = family("hexagon-genus2")
    cfg = SolverConfig(residual_tol=1e-9, max_iters=2000)
    theta, _ = minimize_1d(fam, (0.5, 3.0), tol=1e-8, cfg=cfg)
    d = 1e-4
    slope = (
        hexagon_family_energy(theta + d, 1.0, 1.0)
        - hexagon_family_energy(theta - d, 1.0, 1.0)
    ) / (2.0 * d)
    assert abs(slope) < 1e-5 * (1.0 + hexagon_family_energy(theta, 1.0, 1.0))


def test_minimize_rejects_bracket_hugging_minimum():
    fam = family("hexagon-genus2")
    cfg = SolverConfig(residual_tol=1e-8, max_iters=2000)
    with pytest.raises(BracketError):
        minimize_1d(fam, (2.5, 3.5), tol=1e-3, cfg=cfg)  # minimum outside bracket


def test_evaluator_warm_equals_cold():
    fam = family("hexagon-genus2")
    cfg = SolverConfig(residual_tol=1e-10, max_iters=2000)
    ev = EnergyEvaluator(fam, cfg, warm=True)
    params = (0.9, 1.1, 1.3)
    warm = [ev.energy(s) for s in params]
    cold = [energy_of_parameter(fam, s, cfg) for s in params]
    for a, b in zip(warm, cold):
        assert abs(a - b) < 1e-8 * (1.0 + abs(a))
    assert ev.solve_count == len(params)


def test_sample_curve_modes_agree():
    fam = family("hexagon-genus2")
    cfg = SolverConfig(residual_tol=1e-9, max_iters=2000)
    params = (0.8, 1.2, 1.6)
    warm = sample_curve(fam, params, cfg, warm=True)
    cold = sample_curve(fam, params, cfg, warm=False)
    assert warm.parameters == cold.parameters == params
    for a, b in zip(warm.energies, cold.energies):
        assert abs(a - b) < 1e-8 * (1.0 + abs(a))


def test_properness_probe_grows_both_ways():
    fam = family("hexagon-genus2")
    # wide factors via the closed form: at theta*/8 the deck matrices have
    # norms ~1e4 and f64 residuals cannot be evaluated, let alone solved
    report = properness_probe(
        fam, THETA_STAR, (2.0, 4.0, 8.0),
        energy_fn=lambda s: hexagon_family_energy(s, 1.0, 1.0))
    assert report.ok
    assert report.energies_below[-1] > 2.0 * report.energy_star


def test_properness_probe_solver_backed_near_minimum():
    fam = family("hexagon-genus2")
    cfg = SolverConfig(residual_tol=1e-9, max_iters=2000)
    report = properness_probe(fam, THETA_STAR, (2.0,), cfg)
    assert report.ok
    closed = hexagon_family_energy(THETA_STAR, 1.0, 1.0)
    assert abs(report.energy_star - closed) < 1e-7 * closed


def test_properness_probe_rejects_bad_factors():
    fam = family("hexagon-genus2")
    with pytest.raises(DomainError):
        properness_probe(fam, THETA_STAR, (), energy_fn=lambda s: s)
    with pytest.raises(DomainError):
        properness_probe(fam, THETA_STAR, (0.5, 2.0), energy_fn=lambda s: s)


def test_nonconvergence_raises():
    fam = family("hexagon-genus2")
    cfg = SolverConfig(residual_tol=1e-15, max_iters=3)
    with pytest.raises(NonConvergenceError):
        energy_of_parameter(fam, 1.0, cfg)


def test_triangle_energy_closed_form():
    sides = oracles.triangle_sides_oracle(2, 3, 7)
    want = 168.0 * sum(l * l for l in sides)
    got = triangle_energy(2, 3, 7, 168, 1.0, 1.0, 1.0)
    assert abs(got - want) < 1e-8 * (1.0 + want)


def test_triangle_energy_weights_scale_per_class():
    sides = oracles.triangle_sides_oracle(2, 4, 5)
    w = (2.0, 3.0, 5.0)
    want = 120.0 * sum(wi * l * l for wi, l in zip(w, sides))
    got = triangle_energy(2, 4, 5, 120, *w)
    assert abs(got - want) < 1e-8 * (1.0 + want)
    with pytest.raises(DomainError):
        triangle_energy(2, 3, 7, 0, 1.0, 1.0, 1.0)
    with pytest.raises(DomainError):
        triangle_energy(3, 3, 3, 24, 1.0, 1.0, 1.0)
