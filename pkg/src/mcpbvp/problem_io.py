"""JSON problem-definition files.

Schema::

    {
      "order": 4,
      "interval": [a, b],
      "kind": "linear" | "nonlinear",
      "coefficients": ["f_m", ..., "f_0"],      # linear only
      "residual": "F(z, y0, ..., ym)",          # nonlinear only
      "rhs": "g",
      "conditions": [{"endpoint": "left" | "right", "q": 0, "value": 1.5 | "expr"}],
      "exact": "y(x)"                           # optional
    }

Expressions may use ``x`` (native coordinate) and ``z`` (its image on
``[-1, 1]``); residuals also see ``y0 .. ym``, the derivatives with respect
to ``x``. Condition values are constant expressions.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .discretize import affine_map
from .errors import BvpError
from .expr import Expression, parse_expression
from .problem import BoundaryCondition, LinearBvp, NonlinearBvp

__all__ = ["ProblemFile", "ProblemFileError", "load_problem", "problem_from_dict"]


class ProblemFileError(BvpError):
    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        where = f" (line {line}, column {column})" if line is not None else ""
        super().__init__(f"{message}{where}")
        self.line = line
        self.column = column


@dataclass(frozen=True)
class ProblemFile:
    problem: LinearBvp | NonlinearBvp
    exact: object | None
    source: dict


def _expr(doc, key, variables, where=None):
    text = doc[key] if where is None else where
    try:
        return parse_expression(text, variables)
    except BvpError as exc:
        raise ProblemFileError(f"field {key!r}: {exc}") from exc


def _spatial(expr: Expression, amap):
    def fn(x):
        x = np.asarray(x, dtype=float)
        return expr(x=x, z=amap.to_reference(x))
    return fn


def problem_from_dict(doc: dict, name: str = "") -> ProblemFile:
    """Build a problem (and optional exact solution) from a parsed document."""
    if not isinstance(doc, dict):
        raise ProblemFileError("problem document must be a JSON object")
    for key in ("order", "kind", "conditions"):
        if key not in doc:
            raise ProblemFileError(f"missing required field {key!r}")
    order = doc["order"]
    if not isinstance(order, int) or isinstance(order, bool):
        raise ProblemFileError(f"'order' must be an integer, got {order!r}")
    interval = doc.get("interval", [-1.0, 1.0])
    try:
        amap = affine_map(*interval)
    except (TypeError, ValueError) as exc:
        raise ProblemFileError(f"field 'interval': {exc}") from exc
    space = ("x", "z")
    rhs = _spatial(_expr(doc, "rhs", space), amap) if "rhs" in doc else 0.0

    conditions = []
    for i, c in enumerate(doc["conditions"]):
        try:
            value = c["value"]
            if isinstance(value, str):
                value = parse_expression(value, ()).constant()
            conditions.append(BoundaryCondition(c["endpoint"], int(c["q"]), float(value)))
        except (KeyError, TypeError) as exc:
            raise ProblemFileError(f"condition {i}: missing or invalid field {exc}") from exc
        except BvpError as exc:
            raise ProblemFileError(f"condition {i}: {exc}") from exc

    kind = doc["kind"]
    try:
        if kind == "linear":
            if "coefficients" not in doc:
                raise ProblemFileError("linear problem needs 'coefficients'")
            fns = [
                _spatial(_expr(doc, "coefficients", space, where=t), amap)
                for t in doc["coefficients"]
            ]
            problem = LinearBvp(order, tuple(fns), rhs, tuple(conditions), tuple(interval), name)
        elif kind == "nonlinear":
            if "residual" not in doc:
                raise ProblemFileError("nonlinear problem needs 'residual'")
            slots = tuple(f"y{k}" for k in range(order + 1))
            F = _expr(doc, "residual", space + slots)

            def form(x, d):
                x = np.asarray(x, dtype=float)
                return F(x=x, z=amap.to_reference(x), **dict(zip(slots, d)))

            problem = NonlinearBvp(order, form, tuple(conditions), rhs_fn=rhs,
                                   native_interval=tuple(interval), name=name)
        else:
            raise ProblemFileError(f"'kind' must be 'linear' or 'nonlinear', got {kind!r}")
    except ProblemFileError:
        raise
    except BvpError as exc:
        raise ProblemFileError(str(exc)) from exc

    exact = _spatial(_expr(doc, "exact", space), amap) if doc.get("exact") else None
    return ProblemFile(problem, exact, doc)


def load_problem(path) -> ProblemFile:
    """Read a problem file; JSON syntax errors report line and column."""
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ProblemFileError(f"cannot read {path}: {exc.strerror}") from exc
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ProblemFileError(f"{path}: {exc.msg}", exc.lineno, exc.colno) from exc
    return problem_from_dict(doc, name=path.stem)
