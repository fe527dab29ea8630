"""Monic Chebyshev polynomials.

``Q_0 = 1`` and ``Q_n = 2**(1 - n) * T_n`` for ``n >= 1``, where ``T_n`` is
the first-kind Chebyshev polynomial. Every ``Q_n`` with ``n >= 1`` has leading
coefficient one.

Two evaluation paths are provided for values and derivatives:

* the explicit power series ``Q_n(z) = sum_k b_nk z**(n - 2k)`` and its
  term-by-term m-th derivative, and
* the three-term recurrence ``Q_n = z Q_{n-1} - c_n Q_{n-2}`` (``c_2 = 1/2``,
  ``c_n = 1/4`` otherwise), differentiated m times.

The recurrence is the stable one and is what the collocation assembly uses;
the series serves as an independent cross-check.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

__all__ = [
    "DerivativeFactor",
    "McpBasis",
    "chebyshev_T",
    "derivative_factor",
    "derivative_table",
    "eval_derivative_recurrence",
    "eval_derivative_series",
    "eval_recurrence",
    "horner_eval",
    "inner_product",
    "mcp_coefficients",
]


def _recurrence_shift(n: int) -> float:
    # Q_2 = z Q_1 - Q_0 / 2 ; the 1/4 law only holds from n = 3 on.
    return 0.5 if n == 2 else 0.25


def mcp_coefficients(n: int) -> list[tuple[int, float]]:
    """Power-series form of ``Q_n`` as ``(exponent, coefficient)`` pairs.

    Exponents run ``n, n-2, ..., n mod 2``. The coefficients ``b_nk`` are
    generated from ``b_n0 = 1`` by the term ratio

        b_nk / b_n,k-1 = -(n - 2k + 2)(n - 2k + 1) / (4 k (n - k)),

    which avoids evaluating Gamma functions.
    """
    if n < 0:
        raise ValueError(f"degree must be non-negative, got {n}")
    if n == 0:
        return [(0, 1.0)]
    terms = [(n, 1.0)]
    b = 1.0
    for k in range(1, n // 2 + 1):
        b *= -(n - 2 * k + 2) * (n - 2 * k + 1) / (4.0 * k * (n - k))
        terms.append((n - 2 * k, b))
    return terms


def gamma_coefficient(n: int, k: int) -> float:
    """``b_nk`` from its closed Gamma-function form (used for checking)."""
    return (
        (-1) ** k
        * 2.0 ** (-2 * k)
        * n
        * math.gamma(n - k)
        / (math.gamma(k + 1) * math.gamma(n - 2 * k + 1))
    )


class DerivativeFactor(NamedTuple):
    n: int
    k: int
    m: int
    value: float


def derivative_factor(n: int, k: int, m: int) -> DerivativeFactor:
    """Falling factorial picked up by ``z**(n-2k)`` under m differentiations."""
    p = n - 2 * k
    value = 1.0
    for l in range(m):
        value *= p - l
    return DerivativeFactor(n, k, m, value)


def horner_eval(terms: list[tuple[int, float]], z):
    """Evaluate a parity-strided series ``sum c z**e`` by Horner in ``z**2``.

    ``terms`` must have exponents decreasing in steps of two, as returned by
    :func:`mcp_coefficients`.
    """
    z = np.asarray(z, dtype=float)
    if not terms:
        return np.zeros_like(z)[()]
    z2 = z * z
    acc = np.zeros_like(z)
    for _, c in terms:
        acc = acc * z2 + c
    low = terms[-1][0]
    if low:
        acc = acc * z**low
    return acc[()]


def eval_recurrence(n: int, z):
    """``Q_n(z)`` by the three-term recurrence seeded with ``Q_0 = 1, Q_1 = z``.

    Arguments outside ``[-1, 1]`` are accepted and evaluate the polynomial's
    extrapolation.
    """
    if n < 0:
        raise ValueError(f"degree must be non-negative, got {n}")
    z = np.asarray(z, dtype=float)
    prev, cur = np.ones_like(z), z.copy()
    if n == 0:
        return prev[()]
    for i in range(2, n + 1):
        prev, cur = cur, z * cur - _recurrence_shift(i) * prev
    return cur[()]


def eval_derivative_series(n: int, m: int, z):
    """``Q_n^(m)(z)`` from the differentiated power series.

    Each surviving term is ``b_nk * (n-2k)(n-2k-1)...(n-2k-m+1) * z**(n-2k-m)``
    for ``k = 0 .. floor((n - m) / 2)``. Returns zero when ``m > n``.
    """
    if n < 0 or m < 0:
        raise ValueError("degree and derivative order must be non-negative")
    z = np.asarray(z, dtype=float)
    if m > n:
        return np.zeros_like(z)[()]
    terms = []
    for k, (e, b) in enumerate(mcp_coefficients(n)):
        if e < m:
            break
        terms.append((e - m, b * derivative_factor(n, k, m).value))
    return horner_eval(terms, z)


def derivative_table(n_max: int, m_max: int, z) -> np.ndarray:
    """All ``Q_i^(d)(z)`` for ``i <= n_max``, ``d <= m_max``.

    Returns an array of shape ``(m_max + 1, n_max + 1) + z.shape`` built from
    the differentiated recurrence

        Q_i^(d) = z Q_{i-1}^(d) + d Q_{i-1}^(d-1) - c_i Q_{i-2}^(d).
    """
    z = np.asarray(z, dtype=float)
    out = np.zeros((m_max + 1, n_max + 1) + z.shape)
    out[0, 0] = 1.0
    if n_max >= 1:
        out[0, 1] = z
        if m_max >= 1:
            out[1, 1] = 1.0
    for i in range(2, n_max + 1):
        c = _recurrence_shift(i)
        out[0, i] = z * out[0, i - 1] - c * out[0, i - 2]
        for d in range(1, min(m_max, i) + 1):
            out[d, i] = z * out[d, i - 1] + d * out[d - 1, i - 1] - c * out[d, i - 2]
    return out


def eval_derivative_recurrence(n: int, m: int, z):
    """``Q_n^(m)(z)`` by m-fold differentiation of the recurrence."""
    if n < 0 or m < 0:
        raise ValueError("degree and derivative order must be non-negative")
    z = np.asarray(z, dtype=float)
    if m > n:
        return np.zeros_like(z)[()]
    return derivative_table(n, m, z)[m, n][()]


def chebyshev_T(n: int, z):
    """Classical ``T_n(z) = cos(n arccos z)``; raises outside ``[-1, 1]``."""
    z = np.asarray(z, dtype=float)
    if np.any(np.abs(z) > 1.0):
        raise ValueError("chebyshev_T is defined only on [-1, 1]")
    return np.cos(n * np.arccos(z))[()]


def inner_product(i: int, j: int, quad_points: int | None = None) -> float:
    """Weighted inner product ``<Q_i, Q_j>`` with weight ``(1 - z**2)**-1/2``.

    Uses ``quad_points``-point Gauss-Chebyshev quadrature (default
    ``i + j + 1``, the smallest count accepted).
    """
    need = i + j + 1
    if quad_points is None:
        quad_points = need
    if quad_points < need:
        raise ValueError(f"need at least {need} quadrature points for degrees {i}, {j}")
    k = np.arange(1, quad_points + 1)
    nodes = np.cos((2 * k - 1) * np.pi / (2 * quad_points))
    vals = eval_recurrence(i, nodes) * eval_recurrence(j, nodes)
    return float(np.pi / quad_points * np.sum(vals))


@dataclass(frozen=True)
class McpBasis:
    """Monic Chebyshev family ``Q_0 .. Q_N`` with cached power series."""

    max_degree: int
    coeff_table: tuple[tuple[tuple[int, float], ...], ...] = field(init=False, repr=False)

    def __post_init__(self):
        if self.max_degree < 0:
            raise ValueError("max_degree must be non-negative")
        table = tuple(tuple(mcp_coefficients(n)) for n in range(self.max_degree + 1))
        object.__setattr__(self, "coeff_table", table)

    def __len__(self):
        return self.max_degree + 1

    def table(self, z, max_order: int = 0) -> np.ndarray:
        """Derivatives of every basis member, shape ``(max_order+1, N+1) + z.shape``."""
        return derivative_table(self.max_degree, max_order, z)

    def values(self, z, m: int = 0) -> np.ndarray:
        """``Q_i^(m)(z)`` for all ``i``; shape ``(N+1,) + z.shape``."""
        return self.table(z, m)[m]

    def series(self, n: int, m: int, z):
        return eval_derivative_series(n, m, z)
