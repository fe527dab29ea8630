"""Solving boundary value problems in the monic Chebyshev basis."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .basis import McpBasis, derivative_table
from .discretize import AffineMap, Collocation
from .errors import BvpError
from .numerics import (
    NewtonConfig,
    SolveReport,
    fd_jacobian,
    lstsq_solve,
    lu_solve,
    newton_solve,
)
from .problem import LinearBvp, NonlinearBvp

__all__ = [
    "ErrorReport",
    "SpectralSolution",
    "error_report",
    "evaluate_solution",
    "linearized_guess",
    "solve",
    "solve_linear",
    "solve_nonlinear",
    "uniform_grid",
]

GRID11 = np.linspace(-1.0, 1.0, 11)


def uniform_grid(k: int = 201, interval=(-1.0, 1.0)) -> np.ndarray:
    return np.linspace(interval[0], interval[1], k)


@dataclass(frozen=True)
class SpectralSolution:
    """``y(z) = sum_i A_i Q_i(z)`` together with its map to the native interval."""

    coefficients: np.ndarray
    basis: McpBasis
    map: AffineMap
    report: SolveReport
    boundary: str = "replace"
    residual_inf: float = field(default=float("nan"))

    @property
    def N(self) -> int:
        return self.basis.max_degree

    def __call__(self, x, derivative_order: int = 0):
        return evaluate_solution(self, x, derivative_order)

    def evaluate_reference(self, z, derivative_order: int = 0):
        """Evaluate ``d^m y / dz^m`` at reference abscissae ``z``."""
        z = np.asarray(z, dtype=float)
        tab = derivative_table(self.N, derivative_order, z)[derivative_order]
        return np.tensordot(self.coefficients, tab, axes=(0, 0))[()]


def evaluate_solution(sol: SpectralSolution, points, derivative_order: int = 0):
    """``y^(m)`` at native-coordinate ``points``, chain-rule factor included.

    Points outside the native interval are evaluated by polynomial
    extrapolation; no error is raised.
    """
    x = np.asarray(points, dtype=float)
    if not np.all(np.isfinite(x)):
        raise ValueError("evaluation points must be finite")
    z = sol.map.to_reference(x)
    return (sol.map.scale**derivative_order * np.asarray(sol.evaluate_reference(z, derivative_order)))[()]


@dataclass(frozen=True)
class ErrorReport:
    sample_points: np.ndarray
    absolute_errors: np.ndarray
    exact_values: np.ndarray
    approx_values: np.ndarray

    @property
    def mae(self) -> float:
        return float(np.max(self.absolute_errors))


def error_report(sol: SpectralSolution, exact, points=None) -> ErrorReport:
    """Pointwise absolute error against ``exact`` and its maximum.

    ``points`` default to 201 uniform points on the native interval.
    """
    if points is None:
        points = uniform_grid(201, (sol.map.a, sol.map.b))
    x = np.asarray(points, dtype=float)
    ex = np.broadcast_to(np.asarray(exact(x), dtype=float), x.shape)
    ap = np.asarray(evaluate_solution(sol, x), dtype=float)
    return ErrorReport(x, np.abs(ex - ap), ex, ap)


def _check_N(problem, N):
    if N < 1:
        raise BvpError(f"N must be at least 1, got {N}")
    if N + 1 <= problem.order:
        raise BvpError(
            f"N = {N} is too small: N must be at least the order {problem.order} "
            f"(N + 1 > {problem.order} for {len(problem.conditions)} conditions)"
        )


def solve_linear(problem: LinearBvp, N: int, boundary: str = "replace") -> SpectralSolution:
    """Solve a linear BVP with ``N + 1`` basis functions."""
    _check_N(problem, N)
    col = Collocation.build(problem, N, boundary)
    system = col.linear_system()
    if system.is_square:
        coeffs = lu_solve(system.matrix, system.rhs)
        res = system.matrix @ coeffs - system.rhs
        rnorm = float(np.max(np.abs(res)))
    else:
        coeffs = lstsq_solve(system.matrix, system.rhs)
        rnorm = float(np.max(np.abs(system.matrix @ coeffs - system.rhs)))
    report = SolveReport(
        iterations=0,
        final_residual_norm=rnorm,
        converged=True,
        condition_estimate=float(np.linalg.cond(system.matrix)),
        least_squares=not system.is_square,
    )
    return SpectralSolution(coeffs, col.basis, problem.map, report, boundary, rnorm)


def linearized_guess(col: Collocation) -> np.ndarray:
    """Starting coefficients from the problem linearized about ``y = 0``.

    This is the first Newton iterate from zero; falls back to zeros when that
    linear system cannot be solved.
    """
    zero = np.zeros(col.N + 1)
    try:
        r0 = col.residual(zero)
        J = _jacobian_fn(col, NewtonConfig())(zero)
        if J.shape[0] == J.shape[1]:
            return zero + lu_solve(J, -r0)
        return zero + lstsq_solve(J, -r0)
    except (ArithmeticError, np.linalg.LinAlgError):
        return zero


def _jacobian_fn(col: Collocation, cfg: NewtonConfig):
    if getattr(col.problem, "partials", None) is not None:
        return col.jacobian
    return lambda x: fd_jacobian(col.residual, x, step_scale=cfg.fd_step_scale)


def solve_nonlinear(
    problem: NonlinearBvp,
    N: int,
    config: NewtonConfig | None = None,
    boundary: str = "replace",
    initial=None,
    use_partials: bool = True,
) -> SpectralSolution:
    """Solve a nonlinear BVP by Newton (Gauss-Newton for ``boundary="append"``).

    Uses the problem's analytic partials for the Jacobian when present and
    ``use_partials`` is true; otherwise forward differences.
    """
    _check_N(problem, N)
    cfg = config or NewtonConfig()
    col = Collocation.build(problem, N, boundary)
    x0 = linearized_guess(col) if initial is None else np.asarray(initial, dtype=float)
    jac = col.jacobian if (use_partials and getattr(col.problem, "partials", None) is not None) else None
    coeffs, report = newton_solve(col.residual, x0, cfg, jacobian=jac)
    rnorm = float(np.max(np.abs(col.residual(coeffs))))
    return SpectralSolution(coeffs, col.basis, problem.map, report, boundary, rnorm)


def solve(problem, N: int, config: NewtonConfig | None = None, boundary: str = "replace"):
    """Dispatch on problem kind."""
    if isinstance(problem, LinearBvp):
        return solve_linear(problem, N, boundary)
    if isinstance(problem, NonlinearBvp):
        return solve_nonlinear(problem, N, config, boundary)
    raise TypeError(f"not a BVP: {type(problem).__name__}")
