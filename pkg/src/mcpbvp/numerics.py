"""Dense linear solves and Newton iteration for the collocation equations."""

from __future__ import annotations

from collections.abc import Callable
from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .errors import NonFiniteResidualError, SingularMatrixError

__all__ = [
    "NewtonConfig",
    "SolveReport",
    "fd_jacobian",
    "lstsq_solve",
    "lu_solve",
    "newton_solve",
]

SINGULAR_PIVOT_RATIO = 1e-14


def _pow2_scale(v: np.ndarray) -> np.ndarray:
    # nearest power of two to 1/v, so scaling is exact in binary64
    out = np.ones_like(v)
    nz = v > 0
    out[nz] = np.exp2(-np.round(np.log2(v[nz])))
    return out


def equilibrate(A: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Power-of-two row and column scalings bringing entries of ``A`` near 1."""
    r = _pow2_scale(np.abs(A).max(axis=1))
    c = _pow2_scale(np.abs(A * r[:, None]).max(axis=0))
    return r, c


def lu_solve(matrix, rhs) -> np.ndarray:
    """Solve ``matrix @ x = rhs`` by LU with partial pivoting.

    The matrix is first equilibrated by exact power-of-two row and column
    scalings; collocation matrices mix rows whose magnitudes differ by many
    orders. Raises :class:`SingularMatrixError` if a pivot of the
    equilibrated matrix is below ``1e-14`` times its infinity norm.
    """
    A = np.asarray(matrix, dtype=float)
    b = np.asarray(rhs, dtype=float)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise ValueError(f"lu_solve needs a square matrix, got shape {A.shape}")
    if b.shape[0] != A.shape[0]:
        raise ValueError(f"rhs length {b.shape[0]} does not match matrix size {A.shape[0]}")
    if not np.all(np.isfinite(A)):
        raise ValueError("matrix has non-finite entries")
    r, c = equilibrate(A)
    S = A * r[:, None] * c[None, :]
    norm = np.abs(S).sum(axis=1).max() if S.size else 0.0
    lu, piv = scipy.linalg.lu_factor(S, check_finite=False)
    pivots = np.abs(np.diag(lu))
    tiny = np.flatnonzero(pivots <= SINGULAR_PIVOT_RATIO * norm)
    if norm == 0.0 or tiny.size:
        k = int(tiny[0]) if tiny.size else 0
        raise SingularMatrixError(
            f"matrix is singular to working precision (pivot {k} = {pivots[k]:.3e}, "
            f"||A||_inf = {norm:.3e} after equilibration)",
            pivot_index=k,
        )
    return c * scipy.linalg.lu_solve((lu, piv), r * b, check_finite=False)


def lstsq_solve(matrix, rhs) -> np.ndarray:
    """Minimum-norm least-squares solution of an over-determined system."""
    A = np.asarray(matrix, dtype=float)
    b = np.asarray(rhs, dtype=float)
    x, *_ = np.linalg.lstsq(A, b, rcond=None)
    return x


@dataclass(frozen=True)
class NewtonConfig:
    """Newton iteration controls.

    ``fd_step_scale`` sets the forward-difference step of column ``i`` to
    ``fd_step_scale * (1 + |x_i|)``. ``step_tolerance`` is the stopping rule
    for over-determined (Gauss-Newton) solves, where the residual need not
    vanish: iteration stops once ``||dx||_inf <= step_tolerance * (1 + ||x||_inf)``.
    """

    residual_tolerance: float = 1e-13
    max_iterations: int = 50
    fd_step_scale: float = 2.0**-26
    damping_enabled: bool = True
    max_halvings: int = 20
    step_tolerance: float = 1e-14

    def __post_init__(self):
        if not self.residual_tolerance > 0:
            raise ValueError("residual_tolerance must be positive")
        if self.max_iterations < 1:
            raise ValueError("max_iterations must be at least 1")
        if not self.fd_step_scale > 0:
            raise ValueError("fd_step_scale must be positive")


@dataclass(frozen=True)
class SolveReport:
    """Outcome of a solve.

    For square systems ``converged`` implies
    ``final_residual_norm <= residual_tolerance``. For least-squares solves it
    means the Gauss-Newton step fell below ``step_tolerance``.
    """

    iterations: int
    final_residual_norm: float
    converged: bool
    condition_estimate: float | None = None
    least_squares: bool = False
    history: tuple[float, ...] = ()


def fd_jacobian(residual: Callable, x, r0=None, step_scale: float = 2.0**-26) -> np.ndarray:
    """Forward-difference Jacobian, one residual evaluation per column."""
    x = np.asarray(x, dtype=float)
    if r0 is None:
        r0 = residual(x)
    J = np.empty((r0.shape[0], x.shape[0]))
    for i in range(x.shape[0]):
        h = step_scale * (1.0 + abs(x[i]))
        xp = x.copy()
        xp[i] += h
        # use the representable step to keep the quotient honest
        J[:, i] = (residual(xp) - r0) / (xp[i] - x[i])
    return J


def _norm(r, least_squares):
    return float(np.linalg.norm(r)) if least_squares else float(np.max(np.abs(r), initial=0.0))


def newton_solve(
    residual: Callable,
    initial,
    config: NewtonConfig | None = None,
    jacobian: Callable | None = None,
) -> tuple[np.ndarray, SolveReport]:
    """Newton's method for ``residual(x) = 0``.

    If ``residual`` returns more entries than ``x`` has, each step is the
    least-squares (Gauss-Newton) step instead. ``jacobian`` defaults to
    :func:`fd_jacobian`. With damping on, a step that increases the residual
    norm is halved up to ``config.max_halvings`` times.

    A non-converged run is reported through ``SolveReport.converged``, not
    raised. A singular Jacobian raises :class:`SingularMatrixError` carrying
    the iteration index.
    """
    cfg = config or NewtonConfig()
    x = np.array(initial, dtype=float)
    if not np.all(np.isfinite(x)):
        raise ValueError("initial guess must be finite")
    r = residual(x)
    if r.shape[0] < x.shape[0]:
        raise ValueError("residual has fewer equations than unknowns")
    lsq = r.shape[0] > x.shape[0]
    rnorm = _norm(r, lsq)
    history = [float(np.max(np.abs(r)))]
    converged = not lsq and history[-1] <= cfg.residual_tolerance
    it = 0
    while not converged and it < cfg.max_iterations:
        it += 1
        J = jacobian(x) if jacobian is not None else fd_jacobian(residual, x, r, cfg.fd_step_scale)
        if lsq:
            dx = lstsq_solve(J, -r)
        else:
            try:
                dx = lu_solve(J, -r)
            except SingularMatrixError as exc:
                raise SingularMatrixError(
                    f"singular Jacobian at Newton iteration {it}: {exc}",
                    pivot_index=exc.pivot_index,
                    iteration=it,
                ) from exc
        if lsq and float(np.max(np.abs(dx))) <= cfg.step_tolerance * (1.0 + float(np.max(np.abs(x)))):
            converged = True
            break
        t, accepted = 1.0, False
        for _ in range(cfg.max_halvings + 1 if cfg.damping_enabled else 1):
            x_new = x + t * dx
            try:
                r_new = residual(x_new)
                n_new = _norm(r_new, lsq)
            except NonFiniteResidualError:
                n_new = np.inf
            if np.isfinite(n_new) and (not cfg.damping_enabled or n_new <= rnorm):
                accepted = True
                break
            t *= 0.5
        if not accepted:
            # no descent possible: stagnated at round-off or diverging
            break
        x, r, rnorm = x_new, r_new, n_new
        history.append(float(np.max(np.abs(r))))
        if not lsq:
            converged = history[-1] <= cfg.residual_tolerance
    return x, SolveReport(
        iterations=it,
        final_residual_norm=history[-1],
        converged=bool(converged),
        least_squares=lsq,
        history=tuple(history),
    )
