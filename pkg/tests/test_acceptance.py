"""Acceptance criteria 1-8, one test each.

Every criterion prints a ``criterion k: PASS|FAIL`` line (also collected into
the pytest terminal summary). MAE is measured on 201 uniform points, and each
example uses the boundary-row treatment its published figures were computed
with (``PaperExample.published_boundary``). Run directly with
``python3 tests/test_acceptance.py`` for the lines alone.
"""

import csv
import functools
import io
import math
import subprocess
import sys
from pathlib import Path

import numpy as np

from mcpbvp.basis import (
    McpBasis,
    chebyshev_T,
    derivative_factor,
    eval_derivative_recurrence,
    eval_derivative_series,
    eval_recurrence,
    inner_product,
    mcp_coefficients,
)
from mcpbvp.bvp import GRID11, error_report, solve, solve_linear, solve_nonlinear
from mcpbvp.discretize import assemble_linear_system, cgl_grid
from mcpbvp.examples import EXAMPLE_IDS, PRINTED_EXAMPLE5_COEFFICIENT, builtin, example5
from mcpbvp.numerics import NewtonConfig, lu_solve, newton_solve
from mcpbvp.problem import LinearBvp, left, right

try:
    from conftest import ACCEPTANCE_RESULTS
except ImportError:  # run as a script from elsewhere
    ACCEPTANCE_RESULTS = {}

# N -> published MAE, compared two-sided within a factor of 100
WITHIN_100 = {
    1: {10: 7.5991e-05, 12: 3.5789e-07, 14: 1.2290e-09, 16: 3.5426e-12},
    2: {6: 2.563e-04, 9: 2.809e-08, 10: 9.966e-10, 12: 8.312e-13},
    3: {},
    4: {10: 1.3974e-09, 12: 6.5798e-12, 14: 1.3212e-14},
    5: {12: 1.711e-12, 14: 9.103e-15},
}
# N -> absolute ceiling
CEILING = {1: {20: 1e-13}, 2: {15: 1e-13}, 3: {12: 1e-7, 17: 1e-13}, 4: {}, 5: {16: 1e-13}}


def criterion(k):
    def wrap(fn):
        @functools.wraps(fn)
        def run():
            try:
                detail = fn() or ""
                ok = True
            except AssertionError as exc:
                ok, detail = False, str(exc).splitlines()[0] if str(exc) else "assertion failed"
            ACCEPTANCE_RESULTS[k] = (ok, detail)
            print(f"criterion {k}: {'PASS' if ok else 'FAIL'}  {detail}")
            assert ok, detail
        return run
    return wrap


def mae(k, N, boundary=None):
    ex = builtin(k)
    sol = solve(ex.problem, N, boundary=boundary or ex.published_boundary)
    assert sol.report.converged, f"example {k} N={N} did not converge"
    return error_report(sol, ex.exact).mae


def check_mae_table(k, measured):
    notes = []
    for N, pub in WITHIN_100[k].items():
        m = measured[N]
        assert pub / 100 <= m <= 100 * pub, f"N={N}: MAE {m:.3e} not within x100 of {pub:.3e}"
        notes.append(f"N={N} {m:.2e}/{pub:.2e}")
    for N, cap in CEILING[k].items():
        m = measured[N]
        assert m <= cap, f"N={N}: MAE {m:.3e} > {cap:g}"
        notes.append(f"N={N} {m:.2e}<={cap:g}")
    return ", ".join(notes)


def example_maes(k):
    return {N: mae(k, N) for N in sorted(set(WITHIN_100[k]) | set(CEILING[k]))}


@criterion(1)
def test_criterion_1_example1():
    detail = check_mae_table(1, example_maes(1))
    # informational: exact row replacement is far more accurate than the published figures
    rep = mae(1, 10, "replace")
    return f"{detail}; row replacement N=10 {rep:.2e}"


@criterion(2)
def test_criterion_2_example2():
    return check_mae_table(2, example_maes(2))


@criterion(3)
def test_criterion_3_example3():
    return check_mae_table(3, example_maes(3))


@criterion(4)
def test_criterion_4_example4():
    detail = check_mae_table(4, example_maes(4))
    ex = builtin(4)
    ae = error_report(solve(ex.problem, 10), ex.exact, GRID11).absolute_errors
    peak = int(np.argmax(ae[1:-1])) + 1
    assert abs(GRID11[peak]) <= 0.2 + 1e-12, f"AE peak at z={GRID11[peak]:.1f}, not near 0"
    pub = 1.397438e-09
    assert pub / 100 <= ae[peak] <= 100 * pub, f"peak AE {ae[peak]:.3e} not within x100 of {pub:.3e}"
    return f"{detail}; AE peak z={GRID11[peak]:+.1f} {ae[peak]:.3e}"


def _transcription_residual(ex):
    # independent check: exact solution and its derivatives from sympy
    import sympy as sp

    z = sp.Symbol("z")
    y = 0.25 * (1 - z**2) * sp.exp((z + 1) / 2)
    pts = np.linspace(-1, 1, 50)
    assert np.allclose(ex.exact(pts), sp.lambdify(z, y, "numpy")(pts), rtol=1e-14, atol=0)
    lhs = ex.problem.coefficient_fns[0](0.0) * sp.diff(y, z, 12) + (z + 1) / 2 * y
    g = -(120 + sp.Rational(23, 2) * (z + 1) + (z + 1) ** 3 / 8) * sp.exp((z + 1) / 2)
    f = sp.lambdify(z, lhs - g, "numpy")
    assert np.allclose(ex.problem.rhs_fn(pts), sp.lambdify(z, g, "numpy")(pts), rtol=1e-14)
    return float(np.max(np.abs(f(pts))))


@criterion(5)
def test_criterion_5_example5():
    detail = check_mae_table(5, example_maes(5))
    good = _transcription_residual(builtin(5))
    bad = _transcription_residual(example5(PRINTED_EXAMPLE5_COEFFICIENT))
    assert good <= 1e-9, f"4096 transcription residual {good:.2e}"
    assert bad > 1e-3, f"2096 variant unexpectedly satisfies the equation ({bad:.2e})"
    return f"{detail}; transcription residual 4096 {good:.1e}, 2096 {bad:.1e}"


@criterion(6)
def test_criterion_6_basis():
    rng = np.random.default_rng(6)
    z = rng.uniform(-1, 1, 200)
    for n in range(21):
        assert mcp_coefficients(n)[0] == (n, 1.0), f"Q_{n} not monic"
    for n in range(1, 21):
        err = np.max(np.abs(eval_recurrence(n, z) - 2.0 ** (1 - n) * chebyshev_T(n, z)))
        assert err <= 1e-12, f"Q_{n} vs 2^(1-n) T_{n}: {err:.2e}"
    for n in range(2, 19):
        rhs = (eval_derivative_series(n + 1, 1, z) / (n + 1)
               - eval_derivative_series(n - 1, 1, z) / (4 * (n - 1)))
        err = np.max(np.abs(eval_recurrence(n, z) - rhs))
        assert err <= 1e-10, f"derivative identity n={n}: {err:.2e}"

    def term_scale(n, m, x):
        acc = 0.0
        for k, (e, b) in enumerate(mcp_coefficients(n)):
            if e >= m:
                acc = acc + abs(b * derivative_factor(n, k, m).value) * np.abs(x) ** (e - m)
        return acc

    h, x = 1e-6, np.linspace(-0.9, 0.9, 19)
    for n in range(1, 13):
        for m in range(1, 5):
            fd = (eval_derivative_series(n, m - 1, x + h) - eval_derivative_series(n, m - 1, x - h)) / (2 * h)
            ex = eval_derivative_series(n, m, x)
            scale = np.maximum(np.abs(ex), term_scale(n, m, x))
            assert np.all(np.abs(fd - ex) <= 1e-4 * scale), f"closed-form derivative n={n} m={m} vs FD"
    for n in range(21):
        for m in range(13):
            s = eval_derivative_series(n, m, z)
            r = eval_derivative_recurrence(n, m, z)
            scale = np.maximum(np.abs(r), term_scale(n, m, z))
            assert np.all(np.abs(s - r) <= 1e-11 * np.maximum(scale, 1e-300)), f"paths n={n} m={m}"
    worst = 0.0
    for i in range(16):
        for j in range(16):
            exact = 0.0 if i != j else (math.pi if i == 0 else 2.0 ** (1 - 2 * i) * math.pi)
            worst = max(worst, abs(inner_product(i, j) - exact))
    assert worst <= 1e-12, f"orthogonality error {worst:.2e}"
    return f"orthogonality max error {worst:.1e}"


def _polynomial_exactness(N, rng):
    deg = int(rng.integers(3, N + 1))
    coeffs = np.zeros(N + 1)
    coeffs[: deg + 1] = rng.normal(size=deg + 1)
    basis = McpBasis(N)

    def y(x, m=0):
        return np.tensordot(coeffs, basis.table(np.asarray(x, float), m)[m], axes=(0, 0))

    f = (lambda x: 2 + x**2, lambda x: np.sin(x), lambda x: 1.0 + 0 * x, lambda x: x)
    g = lambda x: sum(f[3 - k](x) * y(x, k) for k in range(4))
    conds = (left(0, float(y(-1.0))), right(0, float(y(1.0))), left(1, float(y(-1.0, 1))))
    s = assemble_linear_system(LinearBvp(3, f, g, conds), cgl_grid(N))
    return float(np.max(np.abs(lu_solve(s.matrix, s.rhs) - coeffs)))


@criterion(7)
def test_criterion_7_structure():
    rng = np.random.default_rng(7)
    worst_poly = max(_polynomial_exactness(N, rng) for N in (4, 6, 9, 12, 16) for _ in range(3))
    assert worst_poly <= 1e-10, f"polynomial exactness {worst_poly:.2e}"
    worst_bc = 0.0
    for k in EXAMPLE_IDS:
        ex = builtin(k)
        for N in ex.published_n:
            sol = solve(ex.problem, N)
            for c in ex.problem.conditions:
                zc = -1.0 if c.endpoint == "left" else 1.0
                worst_bc = max(worst_bc, abs(sol(zc, c.derivative_order) - c.value) / max(1, abs(c.value)))
    assert worst_bc <= 1e-10, f"boundary conditions off by {worst_bc:.2e}"
    worst_path = 0.0
    for k in (2, 3, 4, 5):
        ex = builtin(k)
        for N in ex.published_n[:3]:
            a = error_report(solve_linear(ex.problem, N), ex.exact).mae
            b = error_report(solve_nonlinear(ex.problem.as_nonlinear(), N), ex.exact).mae
            worst_path = max(worst_path, abs(a - b))
    assert worst_path <= 1e-11, f"linear/nonlinear MAE gap {worst_path:.2e}"
    # Newton on A^2 - 1 from A = 2. The ratio e_{k+1}/e_k^2 equals 1/(2 A_k); the first
    # step (A_0 = 2) gives 0.25, the check applies from A_1 = 1.25 onward.
    _, rep = newton_solve(lambda a: a**2 - 1, [2.0], NewtonConfig(damping_enabled=False),
                          jacobian=lambda a: np.array([[2 * a[0]]]))
    errs = [-1 + math.sqrt(1 + r) for r in rep.history]
    ratios = [e1 / e0**2 for e0, e1 in zip(errs[1:], errs[2:]) if e1 > 1e-12]
    assert len(ratios) >= 2 and all(0.3 <= q <= 0.7 for q in ratios), f"contraction ratios {ratios}"
    return (f"poly {worst_poly:.1e}, BC {worst_bc:.1e}, paths {worst_path:.1e}, "
            f"ratios {', '.join(f'{q:.3f}' for q in ratios)}")


def _sweep_csv(k):
    cmd = [sys.executable, "-m", "mcpbvp", "sweep", "--example", str(k), "--format", "csv"]
    res = subprocess.run(cmd, capture_output=True, check=False)
    assert res.returncode == 0, f"sweep example {k} exit {res.returncode}: {res.stderr.decode()[:200]}"
    return res.stdout


@criterion(8)
def test_criterion_8_cli():
    notes = []
    for k in EXAMPLE_IDS:
        first, second = _sweep_csv(k), _sweep_csv(k)
        assert first == second, f"example {k}: sweep output differs between runs"
        rows = list(csv.DictReader(io.StringIO(first.decode())))
        assert rows and list(rows[0]) == ["N", "mae", "newton_iters", "residual_inf"]
        got = {int(r["N"]): float(r["mae"]) for r in rows}
        assert tuple(got) == builtin(k).published_n, f"example {k}: rows {tuple(got)}"
        wanted = {N: got[N] for N in set(WITHIN_100[k]) | set(CEILING[k]) if N in got}
        for N, pub in WITHIN_100[k].items():
            if N in wanted:
                assert pub / 100 <= wanted[N] <= 100 * pub, f"example {k} N={N} CSV MAE {wanted[N]:.3e}"
        for N, cap in CEILING[k].items():
            if N in wanted:
                assert wanted[N] <= cap, f"example {k} N={N} CSV MAE {wanted[N]:.3e} > {cap:g}"
        notes.append(f"ex{k} {len(rows)} rows")
    return "byte-stable; " + ", ".join(notes)


if __name__ == "__main__":
    sys.path.insert(0, str(Path(__file__).parent))
    failed = 0
    for name, fn in sorted(globals().items()):
        if name.startswith("test_criterion_"):
            try:
                fn()
            except AssertionError:
                failed += 1
    sys.exit(1 if failed else 0)
