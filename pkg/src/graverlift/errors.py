"""Exception hierarchy shared by all modules."""


class GraverLiftError(Exception):
    """Base class for every error raised by this package."""


class InvalidSpec(GraverLiftError, ValueError):
    """Matrices of an N-fold specification have incompatible shapes."""


class DimensionError(GraverLiftError, ValueError):
    """Vectors or matrices of mismatched ambient dimension were combined."""


class BudgetExceeded(GraverLiftError, RuntimeError):
    """A configured computation budget (set size, box size, column count) was hit."""


class NotCanonicalizable(GraverLiftError, ValueError):
    """A relation cannot be brought into the shape required by the lift."""

    def __init__(self, reason: str, message: str):
        super().__init__(message)
        self.reason = reason


class ConditionsFailed(GraverLiftError, ValueError):
    """The lift preconditions (a), (b), (c) are not all satisfied."""

    def __init__(self, message: str, certificate=None, step=None):
        super().__init__(message)
        self.certificate = certificate
        self.step = step


class NoCircuitOfSupport3(GraverLiftError, ValueError):
    """No circuit of the Graver column matrix has support of size three or more."""


class InternalError(GraverLiftError, ArithmeticError):
    """A bound formula evaluated to a non-integer; the formula was misused."""
