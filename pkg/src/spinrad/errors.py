"""Exception hierarchy shared across the package."""


class SpinradError(Exception):
    """Base class for all package-specific errors."""


class DomainError(SpinradError, ValueError):
    """An argument violates a documented precondition."""


class QuadratureError(SpinradError, RuntimeError):
    """A numerical integration did not reach the requested tolerance.

    Attributes
    ----------
    estimate : float
        The error estimate reported by the quadrature routine.
    """

    def __init__(self, message, estimate=None):
        super().__init__(message)
        self.estimate = estimate


class ResourceError(SpinradError, RuntimeError):
    """A requested object exceeds the configured memory/dimension budget."""


class ConvergenceError(SpinradError, RuntimeError):
    """An iterative solver failed to converge within its budget.

    Attributes
    ----------
    best_residual : float or None
        Best residual achieved before giving up.
    """

    def __init__(self, message, best_residual=None):
        super().__init__(message)
        self.best_residual = best_residual


class ConfigError(SpinradError, ValueError):
    """A run configuration is syntactically or semantically invalid."""
