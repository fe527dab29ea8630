"""Exception types shared across the package."""


class BvpError(ValueError):
    """Malformed problem or inadmissible discretization."""


class SingularMatrixError(ArithmeticError):
    """LU factorization met a pivot below the singularity threshold."""

    def __init__(self, message, pivot_index=None, iteration=None):
        super().__init__(message)
        self.pivot_index = pivot_index
        self.iteration = iteration


class NonFiniteResidualError(ArithmeticError):
    """A residual entry evaluated to inf or nan."""

    def __init__(self, message, row=None, node_index=None):
        super().__init__(message)
        self.row = row
        self.node_index = node_index
