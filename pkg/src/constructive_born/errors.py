"""Exception hierarchy shared by every module of the package."""

from __future__ import annotations


class ConstructiveBornError(Exception):
    """Base class for all errors raised by this package."""


class StateError(ConstructiveBornError, ValueError):
    pass


class NormViolation(StateError):
    pass


class DimensionMismatch(StateError):
    pass


class DuplicateLabel(StateError):
    pass


class IndexOutOfRange(ConstructiveBornError, IndexError):
    pass


class WeightError(ConstructiveBornError, ValueError):
    pass


class ZeroProbability(WeightError):
    pass


class InfeasibleDenominator(WeightError):
    pass


class WeightMismatch(WeightError):
    pass


class FormulaSyntaxError(ConstructiveBornError, ValueError):
    """Malformed formula text. ``column`` is 1-based."""

    def __init__(self, message: str, column: int, text: str = ""):
        self.column = column
        self.text = text
        super().__init__(f"{message} at column {column}")


class UnknownAtom(ConstructiveBornError, KeyError):
    def __str__(self) -> str:
        return f"unknown atom {self.args[0]!r}"


class FrameError(ConstructiveBornError, ValueError):
    """A Kripke model failed validation."""


class NonMonotoneForcing(FrameError):
    def __init__(self, lower: str, upper: str, atom: str):
        self.lower, self.upper, self.atom = lower, upper, atom
        super().__init__(
            f"forcing not monotone: {lower} <= {upper} but {atom!r} is forced "
            f"at {lower} and not at {upper}"
        )


class UnknownWorld(ConstructiveBornError, KeyError):
    def __str__(self) -> str:
        return f"unknown world {self.args[0]!r}"


class NotMaximalWorld(FrameError):
    pass


class EmptySampleSpace(ConstructiveBornError, ValueError):
    pass


class SpaceMismatch(ConstructiveBornError, ValueError):
    pass


class NonOrthonormalBasis(ConstructiveBornError, ValueError):
    pass


class NonBooleanValue(ConstructiveBornError, ValueError):
    pass
