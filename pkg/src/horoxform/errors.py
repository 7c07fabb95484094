"""Exception types raised by horoxform."""


class HoroxformError(Exception):
    """Base class for all library errors."""


class DimensionMismatch(HoroxformError, ValueError):
    pass


class PreconditionError(HoroxformError, ValueError):
    """An input violates a mathematical precondition (integrability, parameter range)."""


class InvariantBreach(HoroxformError, ArithmeticError):
    """A geometric invariant failed beyond rounding tolerance."""


class NumericalFailure(HoroxformError, ArithmeticError):
    """An iterative numerical procedure did not reach its tolerance.

    The best available value and its error estimate are attached so that
    callers can decide whether a partial result is usable.
    """

    def __init__(self, message, value=float("nan"), error=float("inf"), diagnostics=None):
        super().__init__(message)
        self.value = value
        self.error = error
        self.diagnostics = diagnostics or {}
