"""Exception hierarchy for the package.

Everything raised on purpose derives from MaxentGamesError so callers can
catch one type at the CLI boundary.
"""


class MaxentGamesError(Exception):
    """Base class for all package errors."""


class DegenerateGame(MaxentGamesError):
    """An indifference denominator is zero; the game has no unique mixed equilibrium."""


class NoInteriorEquilibrium(MaxentGamesError):
    """The indifference solution falls on or outside the probability boundary."""


class OutOfRange(MaxentGamesError):
    """A lattice coordinate lies outside [0, n]."""


class EmptySession(MaxentGamesError):
    """A tally was requested for an empty state sequence."""


class MixedPopulationSize(MaxentGamesError):
    """States with differing population sizes were pooled."""


class NotNormalized(MaxentGamesError):
    """A density map does not sum to one within tolerance."""


class InvalidConfidence(MaxentGamesError):
    """A confidence level is outside the open interval (0, 1)."""


class InvalidProbability(MaxentGamesError):
    """A probability argument is outside its valid range."""


class BoundaryMean(MaxentGamesError):
    """The dual solver needs a strictly interior mean observation."""


class NoConvergence(MaxentGamesError):
    """An iterative solver hit its iteration cap before reaching tolerance."""


class DegenerateTheory(MaxentGamesError):
    """Theoretical entropy is zero, so relative deviation is undefined."""


class InsufficientData(MaxentGamesError):
    """A statistic needs more samples than were supplied."""


class InvalidRounds(MaxentGamesError):
    """A simulation was requested with a non-positive round count."""


class ParseError(MaxentGamesError):
    """A file failed to parse; the message carries the offending line number."""


class SchemaError(ParseError):
    """A file parsed but does not match the documented schema."""


class RangeError(ParseError):
    """A parsed value lies outside its documented range."""


class DuplicateId(ParseError):
    """A treatment id appears more than once in a config file."""
