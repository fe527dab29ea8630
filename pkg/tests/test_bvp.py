import math

import numpy as np
import pytest

from mcpbvp.bvp import (
    GRID11,
    SpectralSolution,
    error_report,
    evaluate_solution,
    solve,
    solve_linear,
    solve_nonlinear,
)
from mcpbvp.basis import McpBasis
from mcpbvp.discretize import Collocation, affine_map
from mcpbvp.errors import BvpError
from mcpbvp.examples import EXAMPLE_IDS, builtin
from mcpbvp.numerics import NewtonConfig, SolveReport
from mcpbvp.problem import LinearBvp, left, right
from mcpbvp.problem_io import problem_from_dict

SOLVE_N = {1: (10, 14, 20), 2: (6, 10, 14), 3: (12, 16, 20), 4: (10, 14), 5: (12, 16)}


def solved(k, N, boundary="replace"):
    return solve(builtin(k).problem, N, boundary=boundary)


def fake_solution(coeffs, a=-1.0, b=1.0):
    c = np.asarray(coeffs, float)
    return SpectralSolution(c, McpBasis(len(c) - 1), affine_map(a, b), SolveReport(0, 0.0, True))


def test_line_problem():
    p = LinearBvp(2, (1.0, 0.0, 0.0), 0.0, (left(0, -1.0), right(0, 1.0)))
    sol = solve_linear(p, 4)
    assert np.allclose(sol.coefficients, [0, 1, 0, 0, 0], atol=1e-14)
    assert sol.report.converged and sol.report.iterations == 0


def test_evaluate_trivial():
    assert np.all(evaluate_solution(fake_solution(np.zeros(5)), np.linspace(-1, 1, 7)) == 0)
    assert evaluate_solution(fake_solution([0.0, 1.0]), 0.3) == pytest.approx(0.3, abs=1e-16)
    with pytest.raises(ValueError):
        evaluate_solution(fake_solution([0.0, 1.0]), [np.nan])


def test_native_derivative_chain_rule():
    # y = Q_1(z) = 2x - 1 on [0, 1]
    sol = fake_solution([0.0, 1.0], 0.0, 1.0)
    assert sol(0.75) == pytest.approx(0.5)
    assert sol(0.2, 1) == pytest.approx(2.0)
    assert sol.evaluate_reference(0.2, 1) == pytest.approx(1.0)


def test_error_report_trivial():
    sol = fake_solution([0.5, 0.0, 1.0])
    rep = error_report(sol, lambda z: 0.5 + z**2 - 0.5, np.linspace(-1, 1, 9))
    assert rep.mae <= 1e-16 and np.all(rep.absolute_errors >= 0)
    assert rep.mae == rep.absolute_errors.max()
    assert error_report(sol, lambda z: z * 0).sample_points.size == 201


def test_too_small_N():
    with pytest.raises(BvpError, match="too small"):
        solved(1, 3)
    with pytest.raises(BvpError):
        solved(2, 0)


@pytest.mark.parametrize("k", EXAMPLE_IDS)
def test_boundary_conditions_enforced(k):
    ex = builtin(k)
    for N in SOLVE_N[k]:
        sol = solved(k, N)
        for c in ex.problem.conditions:
            z = -1.0 if c.endpoint == "left" else 1.0
            got = sol(z, c.derivative_order)
            assert abs(got - c.value) <= 1e-10 * max(1.0, abs(c.value))


@pytest.mark.parametrize("k", EXAMPLE_IDS)
def test_residual_certificate(k):
    ex = builtin(k)
    for N in SOLVE_N[k]:
        sol = solved(k, N)
        col = Collocation.build(ex.problem, N)
        g = np.atleast_1d(col.problem.rhs_fn(col.grid.nodes)) if callable(col.problem.rhs_fn) else 0
        bound = 1e-9 * (1 + np.max(np.abs(g)))
        assert np.max(np.abs(col.residual(sol.coefficients))) <= bound


@pytest.mark.parametrize("k", EXAMPLE_IDS)
def test_spectral_decay(k):
    ex = builtin(k)
    maes = [error_report(solve(ex.problem, N, boundary=ex.published_boundary), ex.exact).mae
            for N, _ in ex.published_mae]
    for a, b in zip(maes, maes[1:]):
        assert b <= 10 * max(a, 1e-15)


@pytest.mark.parametrize("k", [2, 3, 4, 5])
def test_linear_nonlinear_consistency(k):
    ex = builtin(k)
    N = SOLVE_N[k][0]
    lin = solve_linear(ex.problem, N)
    nl = solve_nonlinear(ex.problem.as_nonlinear(), N)
    assert nl.report.converged
    assert nl.report.iterations <= 2
    assert abs(error_report(lin, ex.exact).mae - error_report(nl, ex.exact).mae) <= 1e-11
    scale = np.maximum(1.0, np.abs(lin.coefficients))
    assert np.all(np.abs(lin.coefficients - nl.coefficients) <= 1e-12 * scale)


@pytest.mark.parametrize("k", EXAMPLE_IDS)
def test_derivative_consistency(k):
    sol = solved(k, SOLVE_N[k][-1])
    x = np.linspace(-0.9, 0.9, 19)
    h = 1e-5
    fd = (sol(x + h) - sol(x - h)) / (2 * h)
    d1 = sol(x, 1)
    assert np.all(np.abs(fd - d1) <= 1e-5 * np.maximum(np.abs(d1), 1e-3))


def test_example3_n12():
    assert error_report(solved(3, 12), builtin(3).exact).mae <= 1e-8


def test_example5_n16():
    assert error_report(solved(5, 16), builtin(5).exact).mae <= 1e-14


def test_example1_published_boundary_n10():
    rep = error_report(solved(1, 10, "append"), builtin(1).exact, GRID11)
    assert rep.mae == pytest.approx(7.6e-5, rel=0.05)


def test_example1_n20_round_off():
    for mode in ("replace", "append"):
        assert error_report(solved(1, 20, mode), builtin(1).exact).mae <= 1e-14


def test_example1_row_replacement_beats_least_squares():
    ex = builtin(1)
    rep = error_report(solved(1, 10), ex.exact)
    app = error_report(solved(1, 10, "append"), ex.exact)
    assert rep.mae < app.mae / 100


def test_example4_centre_value():
    ex = builtin(4)
    sol = solved(4, 10)
    assert round(float(sol(0.0)), 6) == 0.824361
    ae = error_report(sol, ex.exact, [0.0]).absolute_errors[0]
    assert ae == pytest.approx(1.397e-9, rel=0.01)


def test_nonlinear_analytic_and_fd_jacobians_agree():
    p = builtin(1).problem
    a = solve_nonlinear(p, 14)
    b = solve_nonlinear(p, 14, use_partials=False)
    assert a.report.converged and b.report.converged
    assert np.max(np.abs(a.coefficients - b.coefficients)) <= 1e-12


def test_newton_config_is_used():
    sol = solve_nonlinear(builtin(1).problem, 14, NewtonConfig(max_iterations=1))
    assert sol.report.iterations == 1 and not sol.report.converged


def test_solve_rejects_other_types():
    with pytest.raises(TypeError):
        solve(object(), 4)


def _example1_native():
    return problem_from_dict({
        "order": 4,
        "interval": [0, 1],
        "kind": "nonlinear",
        "residual": "y4 - 6*exp(-4*y0)",
        "rhs": "-12*(1 + x)^(-4)",
        "conditions": [
            {"endpoint": "left", "q": 0, "value": 0},
            {"endpoint": "right", "q": 0, "value": "ln(2)"},
            {"endpoint": "left", "q": 1, "value": 1},
            {"endpoint": "right", "q": 1, "value": 0.5},
        ],
        "exact": "ln(1 + x)",
    })


def test_native_interval_nonlinear_matches_reference():
    pf = _example1_native()
    for N in (10, 16):
        nat = solve(pf.problem, N)
        ref = solved(1, N)
        assert np.max(np.abs(nat.coefficients - ref.coefficients)) <= 1e-12
        x = np.linspace(0, 1, 201)
        assert error_report(nat, pf.exact, x).mae == pytest.approx(error_report(ref, builtin(1).exact).mae,
                                                                     rel=1e-3, abs=1e-15)
        assert nat(0.0, 1) == pytest.approx(1.0, abs=1e-10)


def test_native_interval_linear():
    # y'' + y = 0 on [0, pi/2], y(0) = 0, y(pi/2) = 1 -> sin x
    p = LinearBvp(2, (1.0, 0.0, 1.0), 0.0, (left(0, 0.0), right(0, 1.0)),
                  native_interval=(0.0, math.pi / 2))
    sol = solve(p, 16)
    x = np.linspace(0, math.pi / 2, 50)
    assert np.max(np.abs(sol(x) - np.sin(x))) <= 1e-13
    assert np.max(np.abs(sol(x, 1) - np.cos(x))) <= 1e-11
    # derivative conditions are scaled to the reference interval
    q = LinearBvp(2, (1.0, 0.0, 1.0), 0.0, (left(1, 1.0), right(0, math.sin(1.0))),
                  native_interval=(0.0, 1.0))
    sol = solve(q, 16)
    x = np.linspace(0, 1, 50)
    assert np.max(np.abs(sol(x) - np.sin(x))) <= 1e-13
    assert sol(0.0, 1) == pytest.approx(1.0, abs=1e-12)


def test_solution_deterministic():
    a = solved(1, 12).coefficients
    b = solved(1, 12).coefficients
    assert a.tobytes() == b.tobytes()
