"""Spectral collocation for high-order two-point BVPs in the monic Chebyshev basis."""

from .basis import (
    McpBasis,
    chebyshev_T,
    eval_derivative_recurrence,
    eval_derivative_series,
    eval_recurrence,
    inner_product,
    mcp_coefficients,
)
from .bvp import (
    ErrorReport,
    SpectralSolution,
    error_report,
    evaluate_solution,
    solve,
    solve_linear,
    solve_nonlinear,
)
from .discretize import AffineMap, CglGrid, affine_map, assemble_linear_system, assemble_residual, cgl_grid
from .errors import BvpError, NonFiniteResidualError, SingularMatrixError
from .examples import PaperExample, builtin
from .numerics import NewtonConfig, SolveReport, lu_solve, newton_solve
from .problem import BoundaryCondition, LinearBvp, NonlinearBvp
from .problem_io import load_problem, problem_from_dict

__version__ = "0.1.0"
