"""Exception types shared across the package."""


class ParameterDomainError(ValueError):
    """A structural parameter (exponent, order, size, exponent pair) is out of range."""


class DomainError(ValueError):
    """A point argument lies outside the interval it must belong to."""


class SingularArgumentError(ValueError):
    """An argument sits exactly on a singularity of the operator or kernel."""


class DegenerateInputError(ValueError):
    """The input is degenerate for the requested operation (e.g. a zero function)."""


class EvaluationError(RuntimeError):
    """A user-supplied function returned a non-finite value at a quadrature or grid node."""

    def __init__(self, message: str, node: float | None = None):
        super().__init__(message)
        self.node = node


class ConvergenceError(RuntimeError):
    """An iterative solver failed to reach its tolerance within its iteration cap."""

    def __init__(self, message: str, residual: float | None = None):
        super().__init__(message)
        self.residual = residual
