"""Exception hierarchy shared by all ratrec modules."""


class RatrecError(Exception):
    """Base class for every error raised by this package."""


class ParseError(RatrecError, ValueError):
    """Malformed input text. ``pos`` is a 0-based character offset when known."""

    def __init__(self, message, pos=None):
        self.pos = pos
        if pos is not None:
            message = f"{message} (at position {pos})"
        super().__init__(message)


class FieldMismatch(RatrecError, ValueError):
    pass


class ZeroDenominator(RatrecError, ZeroDivisionError):
    """A denominator became the zero polynomial (symbolic) or zero scalar."""


class DivisionByZeroEvent(ZeroDenominator):
    """Division by zero while stepping a recurrence.

    ``step`` is the index n of the row being read when the failure happened
    (row n+1 could not be produced); ``equation`` is the 0-based index of the
    update that failed.
    """

    def __init__(self, step, equation, name=None):
        self.step = step
        self.equation = equation
        self.name = name
        label = f" ({name})" if name is not None else ""
        super().__init__(f"division by zero at step {step}, equation {equation}{label}")


class ResourceLimit(RatrecError, RuntimeError):
    """A configured size/time budget was exhausted."""


class BoundExceeded(RatrecError, RuntimeError):
    pass


class CyclicDependency(RatrecError, ValueError):
    pass


class InternalInconsistency(RatrecError, AssertionError):
    """A computed certificate failed its own verification (a bug, never a result)."""
