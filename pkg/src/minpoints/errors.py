"""Exception types shared across the package.

Most errors are domain errors (bad input values or specs) and subclass
ValueError so callers can catch them generically.  PrecisionExhausted is
the one operational error: a certified decision could not be resolved
within the configured depth budget.
"""

from __future__ import annotations


class MinPointsError(Exception):
    """Base class for all package-specific errors."""


class ParseError(MinPointsError, ValueError):
    """A textual spec (real number, word id, conic, rational) is malformed."""


class DomainError(MinPointsError, ValueError):
    """An argument is outside the mathematical domain of an operation."""


class StreamExhausted(MinPointsError, ValueError):
    """A partial-quotient stream ran out of terms before a request was met."""


class PrecisionExhausted(MinPointsError):
    """A comparison or rounding decision did not resolve within max_depth.

    Carries the abscissa x0 whose decision failed, when applicable.
    """

    def __init__(self, message: str, x0: int | None = None, depth: int | None = None):
        super().__init__(message)
        self.x0 = x0
        self.depth = depth


class HorizonExceeded(MinPointsError, ValueError):
    """A query lies outside the computed horizon of a Delta function."""


class ZeroVector(DomainError):
    """A non-zero vector was required."""


class DependentVectors(DomainError):
    """Linearly independent vectors were required."""


class BadDegree(DomainError):
    """A polynomial of total degree exactly 2 was required."""


class DegenerateDelta(DomainError):
    """A delta enclosure contains 0, so its logarithm is undefined."""


class InsufficientData(DomainError):
    """Not enough indices are available for the requested verification."""


class ThetaTooSmall(DomainError):
    """theta must exceed (1 - lambda) / (2*lambda - 1)."""


class BadLambda(DomainError):
    """lambda is outside the admissible range."""


class ZeroPolynomial(DomainError):
    """The zero polynomial has no height or degree."""
