"""Exception and warning types shared across the package."""


class RoyRootError(Exception):
    """Base class for all package-specific errors."""


class DomainError(RoyRootError, ValueError):
    """Argument outside the mathematical domain of an operation."""


class ConvergenceError(RoyRootError, RuntimeError):
    """An iterative evaluation exhausted its iteration budget.

    Raised instead of returning a best-effort value: downstream
    normalization checks must never silently absorb a bad number.
    """


class PfaffianSignError(RoyRootError, ArithmeticError):
    """The determinant of a skew-symmetric matrix came out negative.

    Mathematically det = Pf^2 >= 0, so a negative computed value is a
    catastrophic-cancellation alarm; callers escalate working precision.
    """


class PrecisionError(RoyRootError, ArithmeticError):
    """Escalated-precision evaluation still failed its normalization self-check."""

    def __init__(self, message, residual=None):
        super().__init__(message)
        self.residual = residual


class ApproximationValidityWarning(UserWarning):
    """The Tracy-Widom approximation was evaluated outside its stated validity region."""
