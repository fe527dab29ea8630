"""Built-in benchmark problems of orders 4, 3, 6, 9 and 12.

All five are posed directly on ``[-1, 1]``. Examples 1, 2, 4 and 5 are images
of classical problems on ``[0, 1]`` under ``x = (z + 1) / 2``, which is why
their leading coefficients are ``2**m`` (16, 8, 512, 4096).

Example 5 is printed with leading coefficient 2096. Its stated exact solution
``0.25 (1 - z**2) exp((z + 1) / 2)`` only satisfies the equation with
``2**12 = 4096``, so that is what :func:`builtin` uses;
``example5(leading_coefficient=2096)`` builds the printed variant.

Each fixture carries the published error figures verbatim. Those for the
comparison methods are reference constants only; the methods themselves are
not implemented here.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

import numpy as np

from .problem_io import problem_from_dict
from .problem import LinearBvp, NonlinearBvp

__all__ = ["EXAMPLE_IDS", "PaperExample", "builtin", "example5", "PRINTED_EXAMPLE5_COEFFICIENT"]

EXAMPLE_IDS = (1, 2, 3, 4, 5)
PRINTED_EXAMPLE5_COEFFICIENT = 2096.0
EXAMPLE5_COEFFICIENT = 4096.0


@dataclass(frozen=True)
class PaperExample:
    """A benchmark problem with its exact solution and published errors.

    ``published_mae`` holds ``(N, MAE)`` pairs for the collocation method;
    ``published_ae`` and ``published_solution`` hold the pointwise figures at
    ``N = 10`` on ``z = -1(0.2)1`` where they were tabulated.
    ``published_boundary`` records how the published figures treated the
    boundary rows (see :mod:`mcpbvp.discretize`).
    """

    id: int
    problem: LinearBvp | NonlinearBvp
    exact: object
    document: dict
    published_mae: tuple[tuple[int, float], ...]
    published_ae: tuple[tuple[float, float], ...] = ()
    published_solution: tuple[tuple[float, float, float], ...] = ()
    comparison_mae: dict = field(default_factory=dict)
    comparison_ae: tuple[tuple[float, float], ...] = ()
    published_boundary: str = "replace"
    description: str = ""

    @property
    def order(self) -> int:
        return self.problem.order

    @property
    def kind(self) -> str:
        return "nonlinear" if isinstance(self.problem, NonlinearBvp) else "linear"

    @property
    def exact_text(self) -> str:
        return self.document["exact"]

    @property
    def published_n(self) -> tuple[int, ...]:
        return tuple(n for n, _ in self.published_mae)

    def to_json(self) -> dict:
        return dict(self.document)


_Z11 = tuple(round(-1.0 + 0.2 * i, 1) for i in range(11))


def _cond(endpoint, q, value):
    return {"endpoint": endpoint, "q": q, "value": value}


def _example1() -> PaperExample:
    doc = {
        "order": 4,
        "interval": [-1.0, 1.0],
        "kind": "nonlinear",
        "residual": "16*y4 - 6*exp(-4*y0)",
        "rhs": "-12*(1.5 + 0.5*z)^(-4)",
        "conditions": [
            _cond("left", 0, 0.0),
            _cond("right", 0, "ln(2)"),
            _cond("left", 1, 0.5),
            _cond("right", 1, 0.25),
        ],
        "exact": "ln(1.5 + 0.5*z)",
    }
    pf = problem_from_dict(doc, name="example 1")
    zero = lambda z, d: np.zeros_like(d[0])
    partials = (
        lambda z, d: 24.0 * np.exp(-4.0 * d[0]),
        zero,
        zero,
        zero,
        lambda z, d: np.full_like(d[0], 16.0),
    )
    problem = replace(pf.problem, partials=partials)
    approx = (
        0.0002098641, 0.0953558832, 0.1823739721, 0.2624093359, 0.3364999034,
        0.4054692075, 0.4699817600, 0.5305817961, 0.5877209165, 0.6417780693,
        0.6930743766,
    )
    analytic = (
        0.0, 0.0953101798, 0.1823215568, 0.2623642645, 0.3364722366, 0.4054651081,
        0.4700036292, 0.5306282511, 0.5877866649, 0.6418538862, 0.6931471806,
    )
    ae = (
        2.098641e-05, 4.570342e-05, 5.241534e-05, 4.507148e-05, 2.766681e-05,
        4.099373e-06, 2.186930e-05, 4.645491e-05, 6.574845e-05, 7.581684e-05,
        7.280400e-05,
    )
    ref_ae = (
        0.0, 2.954265e-04, 8.719341e-04, 1.4096072e-03, 1.7352146e-03, 1.7810699e-03,
        1.5577013e-03, 1.1349902e-03, 6.286279e-04, 1.902154e-04, 0.0,
    )
    return PaperExample(
        id=1,
        problem=problem,
        exact=lambda z: np.log(1.5 + 0.5 * np.asarray(z, dtype=float)),
        document=doc,
        published_mae=(
            (10, 7.5991e-05), (12, 3.5789e-07), (14, 1.2290e-09),
            (16, 3.5426e-12), (18, 1.5099e-14), (20, 4.4409e-16),
        ),
        published_ae=tuple(zip(_Z11, ae)),
        published_solution=tuple(zip(_Z11, analytic, approx)),
        comparison_ae=tuple(zip(_Z11, ref_ae)),
        # the published figures match all-rows collocation with the
        # conditions appended, solved by least squares
        published_boundary="append",
        description="nonlinear fourth order: 16 y'''' - 6 exp(-4 y) = -12 (1.5 + 0.5 z)^-4",
    )


def _example2() -> PaperExample:
    doc = {
        "order": 3,
        "interval": [-1.0, 1.0],
        "kind": "linear",
        "coefficients": ["8", "0", "0", "-0.5*(z + 1)"],
        "rhs": "(0.125*(z + 1)^3 - 0.5*(z + 1)^2 - 2.5*(z + 1) - 3)*exp(0.5*(z + 1))",
        "conditions": [_cond("left", 0, 0.0), _cond("right", 0, 0.0), _cond("left", 1, 0.5)],
        "exact": "0.25*(1 - z^2)*exp(0.5*(z + 1))",
    }
    pf = problem_from_dict(doc, name="example 2")
    return PaperExample(
        id=2,
        problem=pf.problem,
        exact=lambda z: 0.25 * (1 - np.asarray(z) ** 2) * np.exp(0.5 * (np.asarray(z) + 1)),
        document=doc,
        published_mae=(
            (6, 2.563e-04), (9, 2.809e-08), (10, 9.966e-10),
            (12, 8.312e-13), (14, 4.441e-16), (15, 1.110e-16),
        ),
        comparison_mae={
            "3SHLM1": ((6, 1.079e-06), (9, 1.210e-7), (12, 2.770e-8), (15, 8.900e-09)),
            "3SHLM2": ((6, 9.13e-08), (9, 6.80e-09), (12, 1.10e-09), (15, 2.00e-10)),
            "3SHLM3": ((6, 8.33e-08), (9, 3.30e-09), (12, 9.53e-10), (15, 1.13e-10)),
        },
        description="linear third order: 8 y''' - 0.5 (z + 1) y = g(z)",
    )


def _example3() -> PaperExample:
    doc = {
        "order": 6,
        "interval": [-1.0, 1.0],
        "kind": "linear",
        "coefficients": ["1", "0", "0", "0", "0", "0", "1"],
        "rhs": "12*z*cos(z) + 30*sin(z)",
        "conditions": [
            _cond("left", 0, 0.0),
            _cond("right", 0, 0.0),
            _cond("left", 1, "2*sin(1)"),
            _cond("right", 1, "2*sin(1)"),
            _cond("left", 2, "-4*cos(1) - 2*sin(1)"),
            _cond("right", 2, "4*cos(1) + 2*sin(1)"),
        ],
        "exact": "(z^2 - 1)*sin(z)",
    }
    pf = problem_from_dict(doc, name="example 3")
    return PaperExample(
        id=3,
        problem=pf.problem,
        exact=lambda z: (np.asarray(z) ** 2 - 1) * np.sin(z),
        document=doc,
        published_mae=(
            (12, 3.163e-09), (15, 4.235e-14), (16, 1.920e-14),
            (17, 4.996e-16), (20, 3.330e-16), (24, 6.106e-16),
        ),
        comparison_mae={
            "comparison A": ((12, 1.866e-8), (16, 2.384e-13), (20, 2.797e-16), (24, 2.797e-16)),
            "comparison B": ((12, 1.883e-8), (16, 2.394e-13), (20, 2.797e-16), (24, 3.674e-16)),
        },
        description="linear sixth order: y^(6) + y = 12 z cos z + 30 sin z",
    )


def _example4() -> PaperExample:
    doc = {
        "order": 9,
        "interval": [-1.0, 1.0],
        "kind": "linear",
        "coefficients": ["512"] + ["0"] * 8 + ["-1"],
        "rhs": "-9*exp(0.5*(z + 1))",
        "conditions": [
            _cond("left", 0, 1.0),
            _cond("right", 0, 0.0),
            _cond("left", 1, 0.0),
            _cond("right", 1, "-0.5*e"),
            _cond("left", 2, -0.25),
            _cond("right", 2, "-0.5*e"),
            _cond("left", 3, -0.25),
            _cond("right", 3, "-0.375*e"),
            _cond("left", 4, -0.1875),
        ],
        "exact": "(0.5 - 0.5*z)*exp(0.5*(z + 1))",
    }
    pf = problem_from_dict(doc, name="example 4")
    analytic = (1.000000, 0.994654, 0.977122, 0.944901, 0.895095, 0.824361,
                0.728848, 0.604126, 0.445108, 0.245960, 0.000000)
    approx = analytic[:-1] + (-1.765061e-16,)
    ae = (
        1.110223e-16, 6.585842e-12, 1.205764e-10, 4.923047e-10, 1.029267e-09,
        1.397438e-09, 1.321320e-09, 8.449000e-10, 3.074025e-10, 3.313241e-11,
        1.765061e-16,
    )
    ref_ae = (
        0.0, 2.289423e-10, 4.623567e-09, 2.081388e-08, 4.783428e-08, 7.122960e-08,
        7.339381e-08, 4.961130e-08, 1.629848e-08, 1.814813e-08, 6.940873e-08,
    )
    return PaperExample(
        id=4,
        problem=pf.problem,
        exact=lambda z: (0.5 - 0.5 * np.asarray(z)) * np.exp(0.5 * (np.asarray(z) + 1)),
        document=doc,
        published_mae=(
            (10, 1.3974e-09), (12, 6.5798e-12), (14, 1.3212e-14),
            (16, 4.4409e-16), (18, 3.3307e-16), (20, 4.4409e-16),
        ),
        published_ae=tuple(zip(_Z11, ae)),
        published_solution=tuple(zip(_Z11, analytic, approx)),
        comparison_ae=tuple(zip(_Z11, ref_ae)),
        description="linear ninth order: 512 y^(9) - y = -9 exp(0.5 (z + 1))",
    )


def example5(leading_coefficient: float = EXAMPLE5_COEFFICIENT) -> PaperExample:
    """The twelfth-order problem with a chosen leading coefficient."""
    doc = {
        "order": 12,
        "interval": [-1.0, 1.0],
        "kind": "linear",
        "coefficients": [repr(float(leading_coefficient))] + ["0"] * 11 + ["0.5*(z + 1)"],
        "rhs": "-(120 + 11.5*(z + 1) + 0.125*(z + 1)^3)*exp(0.5*(z + 1))",
        "conditions": [
            _cond("left", 0, 0.0),
            _cond("right", 0, 0.0),
            _cond("left", 1, 0.5),
            _cond("right", 1, "-0.5*e"),
            _cond("left", 2, 0.0),
            _cond("right", 2, "-e"),
            _cond("left", 3, -0.375),
            _cond("right", 3, "-1.125*e"),
            _cond("left", 4, -0.5),
            _cond("right", 4, "-e"),
            _cond("left", 5, -0.46875),
            _cond("right", 5, "-0.78125*e"),
        ],
        "exact": "0.25*(1 - z^2)*exp(0.5*(z + 1))",
    }
    pf = problem_from_dict(doc, name="example 5")
    return PaperExample(
        id=5,
        problem=pf.problem,
        exact=lambda z: 0.25 * (1 - np.asarray(z) ** 2) * np.exp(0.5 * (np.asarray(z) + 1)),
        document=doc,
        published_mae=(
            (12, 1.711e-12), (14, 9.103e-15), (16, 3.330e-16),
            (18, 1.110e-16), (20, 1.110e-16), (22, 1.665e-16),
        ),
        comparison_mae={
            "comparison": ((12, 3.122e-11), (14, 3.104e-12), (16, 4.324e-13),
                           (18, 1.279e-13), (20, 2.312e-14), (22, 4.153e-15)),
        },
        description=f"linear twelfth order: {leading_coefficient:g} y^(12) + 0.5 (z + 1) y = g(z)",
    )


_BUILDERS = {1: _example1, 2: _example2, 3: _example3, 4: _example4, 5: example5}
_CACHE: dict[int, PaperExample] = {}


def builtin(example_id: int) -> PaperExample:
    """Fixture for example ``1..5``."""
    try:
        builder = _BUILDERS[int(example_id)]
    except (KeyError, ValueError, TypeError):
        raise KeyError(f"unknown example {example_id!r}; choose one of {EXAMPLE_IDS}") from None
    if example_id not in _CACHE:
        _CACHE[example_id] = builder()
    return _CACHE[example_id]
