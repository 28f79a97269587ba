"""Exception hierarchy shared by every module of the package."""


class LapRegError(Exception):
    """Base class for all errors raised by :mod:`lapreg`."""


class InvalidArgumentError(LapRegError, ValueError):
    """An argument violates a documented precondition."""


class NumericalFailureError(LapRegError, ArithmeticError):
    """A numerical routine failed; ``residual`` holds the last measured residual."""

    def __init__(self, message, residual=float("nan")):
        super().__init__(message)
        self.residual = residual


class SingularSystemError(NumericalFailureError):
    """The regularized normal equations are singular.

    ``index`` is the offending ``(i, j)`` pair of the spectral divisor
    ``2 * alpha * lambda_i + mu_j``.
    """

    def __init__(self, message, index=None, residual=float("nan")):
        super().__init__(message, residual)
        self.index = index


class NonConvergenceError(NumericalFailureError):
    """An iterative routine exhausted its iteration budget."""


class ConfigError(LapRegError, ValueError):
    """Malformed experiment configuration."""
