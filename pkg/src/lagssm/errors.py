"""Exception types shared across the package."""


class LagssmError(Exception):
    """Base class for all package errors."""


class ArgumentError(LagssmError, ValueError):
    """An argument is out of range, malformed, or inconsistent."""


class DomainError(LagssmError, ValueError):
    """A point lies outside the mathematical domain of an operation."""


class EvaluationError(LagssmError, RuntimeError):
    """An integrand or signal produced a non-finite value.

    Carries the offending abscissa so quadrature failures are debuggable.
    """

    def __init__(self, message, abscissa=None):
        super().__init__(message)
        self.abscissa = abscissa


class NumericError(LagssmError, ArithmeticError):
    """A linear-algebra step failed (singular or ill-conditioned system)."""
