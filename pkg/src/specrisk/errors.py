"""Exception types shared across the package."""


class SpecRiskError(Exception):
    """Base class for all package errors."""


class DomainError(SpecRiskError, ValueError):
    """An argument lies outside its mathematical domain (e.g. alpha >= 1)."""


class InvalidInputError(SpecRiskError, ValueError):
    """Malformed data, configuration, or degenerate input."""


class NumericalError(SpecRiskError, ArithmeticError):
    """A non-finite value appeared during computation.

    ``step`` carries the optimizer step index when the failure happened
    inside an iterative loop, else None.
    """

    def __init__(self, message, step=None):
        super().__init__(message)
        self.step = step
