"""Exception types shared across the package."""

from __future__ import annotations


class LadderError(Exception):
    """Base class for all errors raised by ladderline."""


class InvalidParameterError(LadderError, ValueError):
    """Input values violate a documented invariant."""


class SingularConfigurationError(LadderError, ZeroDivisionError):
    """A closed-form expression hits a zero denominator (e.g. open-circuit load)."""


class SingularNetworkError(LadderError, ZeroDivisionError):
    """The ladder network is singular at some generation.

    ``generation`` is the 1-based generation index where the zero denominator
    appeared, or ``None`` when the failure cannot be localised (dense solve).
    """

    def __init__(self, message: str, generation: int | None = None) -> None:
        super().__init__(message)
        self.generation = generation


class UnsupportedConfigurationError(LadderError, ValueError):
    """A scenario request needs semantics the model does not define."""
