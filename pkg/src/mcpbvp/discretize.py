"""Chebyshev-Gauss-Lobatto collocation for two-point BVPs.

The unknown is expanded as ``y(z) = sum_i A_i Q_i(z)`` and the differential
equation is collocated at ``z_j = cos(pi j / N)``. Boundary conditions enter
in one of two ways:

``"replace"`` (default)
    Square system. Conditions at ``z = +1`` overwrite the collocation rows
    ``j = 0, 1, ...``; conditions at ``z = -1`` overwrite ``j = N, N-1, ...``.
    Within each end the conditions are ordered by derivative order. The
    conditions hold to round-off.

``"append"``
    Every collocation row is kept and the condition rows are stacked below,
    giving an ``(N + 1 + m) x (N + 1)`` system solved in the least-squares
    sense. Conditions are then only satisfied approximately.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .basis import McpBasis
from .errors import BvpError, NonFiniteResidualError

__all__ = [
    "AffineMap",
    "AssembledSystem",
    "CglGrid",
    "Collocation",
    "affine_map",
    "assemble_jacobian",
    "assemble_linear_system",
    "assemble_residual",
    "cgl_grid",
]

BOUNDARY_MODES = ("replace", "append")


@dataclass(frozen=True)
class CglGrid:
    """Nodes ``z_j = cos(pi j / N)``, ``j = 0..N``, decreasing from 1 to -1."""

    n_param: int
    nodes: np.ndarray = field(repr=False)

    def __len__(self):
        return self.n_param + 1


def cgl_grid(N: int) -> CglGrid:
    if N < 1:
        raise BvpError(f"CGL grid needs N >= 1, got {N}")
    j = np.arange(N + 1)
    # sin form of cos(pi j / N): exactly antisymmetric, exact endpoints
    nodes = np.sin(np.pi * (N - 2 * j) / (2 * N))
    nodes[0], nodes[-1] = 1.0, -1.0
    nodes.flags.writeable = False
    return CglGrid(N, nodes)


@dataclass(frozen=True)
class AffineMap:
    """Affine bijection between native ``[a, b]`` and reference ``[-1, 1]``."""

    a: float
    b: float

    @property
    def scale(self) -> float:
        """``dz/dx``; the m-th derivative in ``x`` is ``scale**m`` times that in ``z``."""
        return 2.0 / (self.b - self.a)

    @property
    def is_identity(self) -> bool:
        return self.a == -1.0 and self.b == 1.0

    def to_reference(self, x):
        x = np.asarray(x, dtype=float)
        return ((2.0 * x - self.a - self.b) / (self.b - self.a))[()]

    def from_reference(self, z):
        z = np.asarray(z, dtype=float)
        return (0.5 * (self.b - self.a) * z + 0.5 * (self.a + self.b))[()]


def affine_map(a: float, b: float) -> AffineMap:
    a, b = float(a), float(b)
    if not (math.isfinite(a) and math.isfinite(b)):
        raise BvpError(f"interval endpoints must be finite, got [{a}, {b}]")
    if not a < b:
        raise BvpError(f"interval needs a < b, got [{a}, {b}]")
    return AffineMap(a, b)


@dataclass(frozen=True)
class AssembledSystem:
    """Collocation matrix with its boundary rows.

    ``row_kinds[r]`` is ``("collocation", j)`` for the equation at node
    ``z_j`` or ``("boundary", c)`` for the c-th condition of the problem.
    """

    matrix: np.ndarray
    rhs: np.ndarray
    row_kinds: tuple[tuple[str, int], ...]
    boundary: str = "replace"

    @property
    def is_square(self) -> bool:
        return self.matrix.shape[0] == self.matrix.shape[1]


def _row_layout(conditions, N: int, boundary: str):
    """Map each condition index to its matrix row; returns (kinds, cond_rows)."""
    if boundary not in BOUNDARY_MODES:
        raise BvpError(f"boundary mode must be one of {BOUNDARY_MODES}, got {boundary!r}")
    m = len(conditions)
    if N < m:
        raise BvpError(
            f"N = {N} is too small: N must be at least the problem order with "
            f"{m} conditions (N + 1 > {m})"
        )
    order = sorted(range(m), key=lambda c: (conditions[c].endpoint, conditions[c].derivative_order))
    if boundary == "append":
        kinds = [("collocation", j) for j in range(N + 1)]
        rows = {}
        for c in order:
            rows[c] = len(kinds)
            kinds.append(("boundary", c))
        return tuple(kinds), rows
    kinds = [("collocation", j) for j in range(N + 1)]
    rows = {}
    nr = nl = 0
    for c in order:
        if conditions[c].endpoint == "right":
            r, nr = nr, nr + 1
        else:
            r, nl = N - nl, nl + 1
        rows[c] = r
        kinds[r] = ("boundary", c)
    return tuple(kinds), rows


@dataclass(frozen=True)
class Collocation:
    """Everything needed to evaluate the discrete equations at fixed ``N``.

    Built from a problem already on the reference interval. Basis tables at
    the nodes and at ``z = +-1`` are computed once.
    """

    problem: object
    grid: CglGrid
    basis: McpBasis
    boundary: str
    row_kinds: tuple
    condition_rows: dict
    node_table: np.ndarray = field(repr=False)
    end_table: np.ndarray = field(repr=False)

    @classmethod
    def build(cls, problem, N: int, boundary: str = "replace", basis: McpBasis | None = None):
        problem = problem.on_reference()
        grid = cgl_grid(N)
        if basis is None or basis.max_degree != N:
            basis = McpBasis(N)
        kinds, rows = _row_layout(problem.conditions, N, boundary)
        m = problem.order
        node_table = basis.table(grid.nodes, m)  # (m+1, N+1 basis, N+1 nodes)
        end_table = basis.table(np.array([-1.0, 1.0]), m)
        return cls(problem, grid, basis, boundary, kinds, rows, node_table, end_table)

    @property
    def N(self) -> int:
        return self.grid.n_param

    @property
    def collocation_nodes(self) -> np.ndarray:
        """Indices ``j`` of the nodes whose equations are retained."""
        return np.array([j for kind, j in self.row_kinds if kind == "collocation"], dtype=int)

    def _collocation_rows(self) -> np.ndarray:
        return np.array([r for r, (kind, _) in enumerate(self.row_kinds) if kind == "collocation"])

    def boundary_row(self, bc) -> np.ndarray:
        return self.end_table[bc.derivative_order, :, 0 if bc.endpoint == "left" else 1]

    def linear_system(self) -> AssembledSystem:
        p = self.problem
        if not hasattr(p, "coefficient_fns"):
            raise BvpError("linear assembly needs a LinearBvp")
        rows = self._collocation_rows()
        nodes_idx = self.collocation_nodes
        z = self.grid.nodes[nodes_idx]
        n_rows = len(self.row_kinds)
        A = np.zeros((n_rows, self.N + 1))
        lead = np.broadcast_to(p.coefficient(p.order)(z), z.shape)
        if not np.any(lead != 0.0):
            raise BvpError("leading coefficient vanishes at every collocation node")
        for k in range(p.order + 1):
            fk = np.broadcast_to(np.asarray(p.coefficient(k)(z), dtype=float), z.shape)
            A[rows] += fk[:, None] * self.node_table[k][:, nodes_idx].T
        b = np.zeros(n_rows)
        b[rows] = np.broadcast_to(p.rhs_fn(z), z.shape)
        for c, bc in enumerate(p.conditions):
            A[self.condition_rows[c]] = self.boundary_row(bc)
            b[self.condition_rows[c]] = bc.value
        return AssembledSystem(A, b, self.row_kinds, self.boundary)

    def _node_derivatives(self, coeffs):
        # d[k][j] = y^(k)(z_j) at retained nodes
        nodes_idx = self.collocation_nodes
        return nodes_idx, np.einsum("kin,i->kn", self.node_table[:, :, nodes_idx], coeffs)

    def residual(self, coeffs) -> np.ndarray:
        p = self.problem
        coeffs = np.asarray(coeffs, dtype=float)
        if coeffs.shape != (self.N + 1,):
            raise BvpError(f"expected {self.N + 1} coefficients, got shape {coeffs.shape}")
        nodes_idx, d = self._node_derivatives(coeffs)
        z = self.grid.nodes[nodes_idx]
        if hasattr(p, "residual_form"):
            F = p.residual_form(z, d)
        else:
            F = sum(p.coefficient(k)(z) * d[k] for k in range(p.order + 1))
        r = np.zeros(len(self.row_kinds))
        r[self._collocation_rows()] = F - p.rhs_fn(z)
        for c, bc in enumerate(p.conditions):
            r[self.condition_rows[c]] = self.boundary_row(bc) @ coeffs - bc.value
        bad = np.flatnonzero(~np.isfinite(r))
        if bad.size:
            row = int(bad[0])
            kind, idx = self.row_kinds[row]
            where = f"node j={idx}" if kind == "collocation" else f"boundary condition {idx}"
            raise NonFiniteResidualError(
                f"non-finite residual at row {row} ({where})",
                row=row,
                node_index=idx if kind == "collocation" else None,
            )
        return r

    def jacobian(self, coeffs) -> np.ndarray:
        """Analytic Jacobian of :meth:`residual`; needs ``partials`` on the problem."""
        p = self.problem
        partials = getattr(p, "partials", None)
        if partials is None:
            if hasattr(p, "residual_form"):
                raise BvpError("problem has no analytic partials")
            partials = tuple(
                (lambda z, d, k=k: p.coefficient(k)(z) * np.ones_like(d[0]))
                for k in range(p.order + 1)
            )
        coeffs = np.asarray(coeffs, dtype=float)
        nodes_idx, d = self._node_derivatives(coeffs)
        z = self.grid.nodes[nodes_idx]
        J = np.zeros((len(self.row_kinds), self.N + 1))
        rows = self._collocation_rows()
        for k in range(p.order + 1):
            dk = np.broadcast_to(partials[k](z, d), z.shape)
            J[rows] += dk[:, None] * self.node_table[k][:, nodes_idx].T
        for c, bc in enumerate(p.conditions):
            J[self.condition_rows[c]] = self.boundary_row(bc)
        return J


def assemble_linear_system(problem, grid: CglGrid, basis: McpBasis | None = None,
                           boundary: str = "replace") -> AssembledSystem:
    """Collocation matrix and right-hand side for a :class:`LinearBvp`."""
    return Collocation.build(problem, grid.n_param, boundary, basis).linear_system()


def assemble_residual(problem, grid: CglGrid, basis: McpBasis | None, coeffs,
                      boundary: str = "replace") -> np.ndarray:
    """Discrete residual of a (linear or nonlinear) problem at ``coeffs``."""
    return Collocation.build(problem, grid.n_param, boundary, basis).residual(coeffs)


def assemble_jacobian(problem, grid: CglGrid, basis: McpBasis | None, coeffs,
                      boundary: str = "replace") -> np.ndarray:
    return Collocation.build(problem, grid.n_param, boundary, basis).jacobian(coeffs)
