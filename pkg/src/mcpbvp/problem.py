"""Problem definitions for two-point boundary value problems.

A problem is authored on a native interval ``[a, b]`` and is solved on the
reference interval ``[-1, 1]``. :meth:`LinearBvp.on_reference` and
:meth:`NonlinearBvp.on_reference` perform the change of variables once:
coefficient functions are composed with the inverse map, the coefficient of
the k-th derivative picks up ``sigma**k`` (``sigma = 2 / (b - a)``), and
boundary derivative values are divided by ``sigma**q``.
"""

from __future__ import annotations

from collections.abc import Callable, Sequence
from dataclasses import dataclass, field, replace

import numpy as np

from .discretize import AffineMap, affine_map
from .errors import BvpError

__all__ = [
    "BoundaryCondition",
    "BvpError",
    "LinearBvp",
    "NonlinearBvp",
]

ScalarFn = Callable[[np.ndarray], np.ndarray]


def _as_fn(f) -> ScalarFn:
    if callable(f):
        return f
    c = float(f)
    return lambda z: np.full(np.shape(z), c)


@dataclass(frozen=True)
class BoundaryCondition:
    """``y^(q)`` at one endpoint equals ``value``.

    ``endpoint`` is ``"left"`` (``x = a``, ``z = -1``) or ``"right"``.
    """

    endpoint: str
    derivative_order: int
    value: float

    def __post_init__(self):
        if self.endpoint not in ("left", "right"):
            raise BvpError(f"endpoint must be 'left' or 'right', got {self.endpoint!r}")
        if self.derivative_order < 0:
            raise BvpError("derivative order must be non-negative")
        object.__setattr__(self, "value", float(self.value))

    @property
    def z(self) -> float:
        return -1.0 if self.endpoint == "left" else 1.0


def left(q: int, value: float) -> BoundaryCondition:
    return BoundaryCondition("left", q, value)


def right(q: int, value: float) -> BoundaryCondition:
    return BoundaryCondition("right", q, value)


def _check_conditions(order: int, conditions: Sequence[BoundaryCondition]):
    if order < 1:
        raise BvpError(f"problem order must be at least 1, got {order}")
    if len(conditions) != order:
        raise BvpError(
            f"an order-{order} problem needs {order} boundary conditions, got {len(conditions)}"
        )
    seen = set()
    for bc in conditions:
        key = (bc.endpoint, bc.derivative_order)
        if key in seen:
            raise BvpError(f"duplicate condition on y^({bc.derivative_order}) at {bc.endpoint} end")
        seen.add(key)
        if bc.derivative_order >= order:
            raise BvpError(
                f"condition on y^({bc.derivative_order}) is not below the problem order {order}"
            )


def _scaled_conditions(conditions, sigma: float):
    return tuple(
        replace(bc, value=bc.value / sigma**bc.derivative_order) for bc in conditions
    )


@dataclass(frozen=True)
class LinearBvp:
    """``sum_k f_k(x) y^(k)(x) = g(x)`` on ``[a, b]``.

    ``coefficient_fns`` is ordered from highest derivative down:
    ``(f_m, f_{m-1}, ..., f_0)``. Entries may be callables or constants.
    """

    order: int
    coefficient_fns: tuple
    rhs_fn: ScalarFn
    conditions: tuple[BoundaryCondition, ...]
    native_interval: tuple[float, float] = (-1.0, 1.0)
    name: str = ""

    def __post_init__(self):
        fns = tuple(_as_fn(f) for f in self.coefficient_fns)
        if len(fns) != self.order + 1:
            raise BvpError(
                f"order-{self.order} problem needs {self.order + 1} coefficient functions, "
                f"got {len(fns)}"
            )
        object.__setattr__(self, "coefficient_fns", fns)
        object.__setattr__(self, "rhs_fn", _as_fn(self.rhs_fn))
        object.__setattr__(self, "conditions", tuple(self.conditions))
        object.__setattr__(self, "native_interval", tuple(map(float, self.native_interval)))
        _check_conditions(self.order, self.conditions)
        affine_map(*self.native_interval)

    @property
    def map(self) -> AffineMap:
        return affine_map(*self.native_interval)

    def coefficient(self, k: int) -> ScalarFn:
        """Coefficient of ``y^(k)``."""
        return self.coefficient_fns[self.order - k]

    def on_reference(self) -> LinearBvp:
        """Equivalent problem in ``z`` on ``[-1, 1]``."""
        amap = self.map
        if amap.is_identity:
            return self
        sigma = amap.scale
        fns = []
        for k in range(self.order, -1, -1):
            f = self.coefficient(k)
            fns.append(lambda z, f=f, s=sigma**k: s * f(amap.from_reference(z)))
        g = self.rhs_fn
        return LinearBvp(
            self.order,
            tuple(fns),
            lambda z: g(amap.from_reference(z)),
            _scaled_conditions(self.conditions, sigma),
            (-1.0, 1.0),
            self.name,
        )

    def as_nonlinear(self) -> NonlinearBvp:
        """The same problem posed in residual form ``F(z, y0..ym) - g = 0``."""
        fns = [self.coefficient(k) for k in range(self.order + 1)]

        def form(z, d):
            return sum(fns[k](z) * d[k] for k in range(self.order + 1))

        partials = tuple(
            (lambda z, d, f=f: f(z) * np.ones_like(d[0])) for f in fns
        )
        return NonlinearBvp(
            self.order,
            form,
            self.conditions,
            rhs_fn=self.rhs_fn,
            native_interval=self.native_interval,
            partials=partials,
            name=self.name,
        )


@dataclass(frozen=True)
class NonlinearBvp:
    """``F(x, y, y', ..., y^(m)) = g(x)`` on ``[a, b]``.

    ``residual_form(z, d)`` receives the abscissae and a sequence ``d`` with
    ``d[k]`` the k-th derivative values, and must be vectorized over points.
    ``partials``, when given, holds ``dF/dy^(k)`` for ``k = 0..m`` with the
    same signature; otherwise Jacobians are formed by finite differences.
    """

    order: int
    residual_form: Callable
    conditions: tuple[BoundaryCondition, ...]
    rhs_fn: ScalarFn = field(default=0.0)
    native_interval: tuple[float, float] = (-1.0, 1.0)
    partials: tuple | None = None
    name: str = ""

    def __post_init__(self):
        object.__setattr__(self, "rhs_fn", _as_fn(self.rhs_fn))
        object.__setattr__(self, "conditions", tuple(self.conditions))
        object.__setattr__(self, "native_interval", tuple(map(float, self.native_interval)))
        if self.partials is not None:
            if len(self.partials) != self.order + 1:
                raise BvpError("partials must cover every derivative slot 0..order")
            object.__setattr__(self, "partials", tuple(self.partials))
        _check_conditions(self.order, self.conditions)
        affine_map(*self.native_interval)

    @property
    def map(self) -> AffineMap:
        return affine_map(*self.native_interval)

    def on_reference(self) -> NonlinearBvp:
        amap = self.map
        if amap.is_identity:
            return self
        sigma = amap.scale
        scales = np.array([sigma**k for k in range(self.order + 1)])
        F, g = self.residual_form, self.rhs_fn

        def form(z, d):
            return F(amap.from_reference(z), [s * dk for s, dk in zip(scales, d)])

        partials = None
        if self.partials is not None:
            partials = tuple(
                (
                    lambda z, d, p=p, s=s: s
                    * p(amap.from_reference(z), [t * dk for t, dk in zip(scales, d)])
                )
                for p, s in zip(self.partials, scales)
            )
        return NonlinearBvp(
            self.order,
            form,
            _scaled_conditions(self.conditions, sigma),
            rhs_fn=lambda z: g(amap.from_reference(z)),
            native_interval=(-1.0, 1.0),
            partials=partials,
            name=self.name,
        )
