"""Exception types shared across the package."""

from __future__ import annotations


class DiophError(Exception):
    """Base class for all library errors."""


class ValidationError(DiophError, ValueError):
    """Malformed or out-of-contract input."""


class PrecisionExhausted(DiophError):
    """An interval comparison could not be decided within the precision budget."""


class BudgetExceeded(DiophError):
    """An exact computation would exceed its configured size budget."""


class InvalidSurd(ValidationError):
    pass


class NotPrime(ValidationError):
    pass


class TooFewRecords(DiophError):
    pass


class TooFewPoints(DiophError):
    pass


class OutOfRange(ValidationError):
    pass


class NoSignChange(DiophError):
    pass


class ResolutionTooCoarse(DiophError):
    pass


class FoldNotApplicable(DiophError):
    pass
