"""Shared exception types.

Every hard failure in the library is one of these, so callers (and the
CLI exit-code mapping) can dispatch on type rather than message text.
"""


class GlnLabError(Exception):
    """Base class for all library errors."""


class NotPrime(GlnLabError):
    pass


class CapExceeded(GlnLabError):
    """An exhaustive enumeration would exceed the configured size cap."""


class BadSubfield(GlnLabError):
    pass


class NotInvertible(GlnLabError):
    pass


class PrecisionExhausted(GlnLabError):
    """A truncated-ring computation needs more p-adic digits than available."""


class NonIntegral(GlnLabError):
    """A quantity required to be an integer (e.g. a Cartan integer) is not."""


class NotPositiveDefinite(GlnLabError):
    pass


class NotFound(GlnLabError):
    pass


class NotACocycle(GlnLabError):
    pass


class NoTrivialization(GlnLabError):
    pass


class MatchFailure(GlnLabError):
    """A claimed bijection could not be completed."""


class UnsupportedRank(GlnLabError):
    pass


class CharacterMismatch(GlnLabError):
    pass


class RankMismatch(GlnLabError):
    pass


class ZeroEntry(GlnLabError):
    pass


class BaseMismatch(GlnLabError):
    pass


class InvalidConfig(GlnLabError):
    pass
