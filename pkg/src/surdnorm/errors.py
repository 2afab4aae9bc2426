"""Exception types raised by the library.

All of them derive from :class:`ValueError` so callers that only care about
"bad input" can catch one thing; the CLI maps them to distinct exit codes.
"""

from __future__ import annotations


class SurdError(ValueError):
    """Base class for every error raised by :mod:`surdnorm`."""


class PerfectSquareRadicand(SurdError):
    """The radicand of a surd is a perfect square (or below 2)."""


class BadScale(SurdError):
    """The scale exponent ``l`` does not satisfy ``2**l > s``."""


class OutOfRange(SurdError):
    """A value lies outside the interval an operation requires."""


class PrecisionExhausted(SurdError):
    """Interval refinement hit the guard-bit cap without pinning a floor."""


class SearchExhausted(SurdError):
    """A minimal-index search ran past its cap without a witness."""


class IndexBeyondLength(SurdError):
    """A requested digit index exceeds the computed expansion length."""


class LengthMismatch(SurdError):
    """Two expansions that must be compared have different lengths."""


class InconsistentFlip(SurdError):
    """A digit flip direction contradicts the digit it is applied to."""
