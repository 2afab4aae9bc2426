"""Quadratic surds, their binary digits and digit-frequency statistics.

A :class:`QuadraticSurd` is the exact real ``(p + q*sqrt(s)) / 2**t``. The
class is closed under squaring and under adding dyadic rationals, which is
all the digit experiments need, so every evaluation point stays exact.

Digits are 1-based: digit ``j`` of ``x`` in ``[0, 1)`` is
``floor(2**j * x) mod 2``.
"""

from __future__ import annotations

import enum
from collections.abc import Iterable, Sequence
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .bigint_core import is_perfect_square, isqrt, pinned_floor
from .errors import (
    BadScale,
    IndexBeyondLength,
    LengthMismatch,
    OutOfRange,
    PerfectSquareRadicand,
)


@dataclass(frozen=True)
class QuadraticSurd:
    """The real number ``(p + q*sqrt(s)) / 2**t``.

    Instances are canonical: common factors of two are stripped from ``p``
    and ``q`` while ``t > 0``. Since ``sqrt(s)`` is irrational, two surds with
    the same radicand are equal exactly when their fields are.
    """

    p: int
    q: int
    s: int
    t: int = 0

    def __post_init__(self) -> None:
        if self.s < 2 or is_perfect_square(self.s):
            raise PerfectSquareRadicand(f"radicand {self.s} is not a nonsquare >= 2")
        if self.t < 0:
            raise ValueError(f"denominator exponent must be >= 0, got {self.t}")
        p, q, t = self.p, self.q, self.t
        if p == 0 and q == 0:
            t = 0
        while t > 0 and p % 2 == 0 and q % 2 == 0:
            p, q, t = p // 2, q // 2, t - 1
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "q", q)
        object.__setattr__(self, "t", t)

    @property
    def is_rational(self) -> bool:
        return self.q == 0

    def __float__(self) -> float:
        return pinned_floor(self, 80) / 2.0**80

    def __str__(self) -> str:
        body = f"{self.p} {'-' if self.q < 0 else '+'} {abs(self.q)}*sqrt({self.s})"
        return f"({body})/2^{self.t}" if self.t else f"({body})"

    def as_dict(self) -> dict[str, int]:
        return {"p": self.p, "q": self.q, "s": self.s, "t": self.t}


def make_surd(p: int, q: int, s: int, t: int = 0) -> QuadraticSurd:
    return QuadraticSurd(p, q, s, t)


def square_surd(x: QuadraticSurd) -> QuadraticSurd:
    """``x**2`` as ``((p^2 + q^2 s) + 2pq*sqrt(s)) / 2**(2t)``."""
    return QuadraticSurd(x.p * x.p + x.q * x.q * x.s, 2 * x.p * x.q, x.s, 2 * x.t)


def add_dyadic(x: QuadraticSurd, num: int, pow: int) -> QuadraticSurd:
    """``x + num / 2**pow``."""
    if pow < 0:
        raise ValueError(f"dyadic exponent must be >= 0, got {pow}")
    t = max(x.t, pow)
    return QuadraticSurd(
        (x.p << (t - x.t)) + (num << (t - pow)), x.q << (t - x.t), x.s, t
    )


def lambda_of(s: int) -> QuadraticSurd:
    """Fractional part ``sqrt(s) - floor(sqrt(s))``, a value in ``(0, 1)``."""
    if s < 2 or is_perfect_square(s):
        raise PerfectSquareRadicand(f"radicand {s} is not a nonsquare >= 2")
    return QuadraticSurd(-isqrt(s), 1, s, 0)


def minimal_scale(s: int) -> int:
    """Smallest ``l`` with ``2**l > s``."""
    return s.bit_length()


def build_lemma_points(s: int, l: int) -> tuple[QuadraticSurd, QuadraticSurd]:
    """The pair ``1 - sqrt(s)/2**(2l)`` and ``(sqrt(s) - 1)/2**l``.

    Their squares differ by a dyadic rational with denominator ``2**(4l)``,
    so the binary expansions of the squares coincide beyond position ``4l``.
    """
    if s < 2 or is_perfect_square(s):
        raise PerfectSquareRadicand(f"radicand {s} is not a nonsquare >= 2")
    if l < 0 or (1 << l) <= s:
        raise BadScale(f"need 2**l > s, got s={s}, l={l}")
    first = QuadraticSurd(1 << (2 * l), -1, s, 2 * l)
    second = QuadraticSurd(-1, 1, s, l)
    return first, second


class Exactness(str, enum.Enum):
    TRUNCATED_IRRATIONAL = "TruncatedIrrational"
    TERMINATING_DYADIC = "TerminatingDyadic"


class DyadicExpansion:
    """An exact prefix ``x_1 ... x_L`` of a binary expansion.

    ``bits[j - 1]`` holds digit ``j``. A terminating expansion has an
    implicit all-zero tail past its last nonzero digit.
    """

    __slots__ = ("_bits", "exactness")

    def __init__(
        self,
        bits: Iterable[int] | np.ndarray,
        exactness: Exactness = Exactness.TRUNCATED_IRRATIONAL,
    ) -> None:
        arr = np.array(bits, dtype=np.uint8).reshape(-1)
        if arr.size and arr.max() > 1:
            raise ValueError("bits must be 0 or 1")
        arr.flags.writeable = False
        self._bits = arr
        self.exactness = Exactness(exactness)

    @classmethod
    def from_string(
        cls, text: str, exactness: Exactness = Exactness.TRUNCATED_IRRATIONAL
    ) -> DyadicExpansion:
        if text.strip("01"):
            raise ValueError(f"not a bit string: {text!r}")
        arr = np.frombuffer(text.encode("ascii"), dtype=np.uint8) - ord("0")
        return cls(arr, exactness)

    @property
    def bits(self) -> np.ndarray:
        return self._bits

    @property
    def length(self) -> int:
        return int(self._bits.size)

    def __len__(self) -> int:
        return self.length

    def __getitem__(self, j: int) -> int:
        """Digit ``j`` (1-based)."""
        if not 1 <= j <= self.length:
            raise IndexBeyondLength(f"digit {j} outside 1..{self.length}")
        return int(self._bits[j - 1])

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, DyadicExpansion):
            return NotImplemented
        return self.exactness == other.exactness and np.array_equal(
            self._bits, other._bits
        )

    def __hash__(self) -> int:
        return hash((self._bits.tobytes(), self.exactness))

    def __str__(self) -> str:
        return self.to_string()

    def __repr__(self) -> str:
        text = self.to_string()
        if len(text) > 40:
            text = text[:37] + "..."
        return f"DyadicExpansion('{text}', L={self.length}, {self.exactness.value})"

    def to_string(self) -> str:
        return (self._bits + ord("0")).tobytes().decode("ascii")

    def to_int(self) -> int:
        """The prefix read as a binary integer, i.e. ``floor(2**L * x)``."""
        return int(self.to_string(), 2) if self.length else 0

    def prefix(self, length: int) -> DyadicExpansion:
        if length > self.length:
            raise IndexBeyondLength(f"prefix {length} longer than {self.length}")
        return DyadicExpansion(self._bits[:length], self.exactness)


def digits(x: QuadraticSurd, L: int) -> DyadicExpansion:
    """Digits ``1..L`` of ``x``, which must lie in ``[0, 1)``."""
    if L < 0:
        raise ValueError(f"length must be >= 0, got {L}")
    if not 0 <= pinned_floor(x, 0) < 1:
        raise OutOfRange(f"{x} is not in [0, 1)")
    exactness = (
        Exactness.TERMINATING_DYADIC if x.is_rational else Exactness.TRUNCATED_IRRATIONAL
    )
    if L == 0:
        return DyadicExpansion([], exactness)
    scaled = pinned_floor(x, L)
    return DyadicExpansion.from_string(format(scaled, f"0{L}b"), exactness)


def complement_digits(e: DyadicExpansion) -> DyadicExpansion:
    return DyadicExpansion(1 - e.bits, Exactness.TRUNCATED_IRRATIONAL)


@dataclass(frozen=True)
class FrequencyPoint:
    """Counts of ones among the first ``n`` digits."""

    n: int
    ones: int

    @property
    def f(self) -> Fraction:
        """Relative frequency of ones."""
        return Fraction(self.ones, self.n)

    @property
    def g(self) -> Fraction:
        """Relative frequency of zeros."""
        return Fraction(self.n - self.ones, self.n)

    def csv_row(self) -> str:
        f = self.f
        return f"{self.n},{self.ones},{f.numerator},{f.denominator}"


CSV_HEADER = "n,ones,f_num,f_den"


def freq_series(e: DyadicExpansion, indices: Sequence[int]) -> list[FrequencyPoint]:
    """Frequency points ``f_n`` for each ``n`` in ``indices``."""
    counts = np.cumsum(e.bits, dtype=np.int64)
    out = []
    for n in indices:
        if n < 1 or n > e.length:
            raise IndexBeyondLength(f"index {n} outside 1..{e.length}")
        out.append(FrequencyPoint(int(n), int(counts[n - 1])))
    return out


def first_tail_agreement(a: DyadicExpansion, b: DyadicExpansion) -> int | None:
    """Smallest ``j`` such that ``a`` and ``b`` agree at every position ``>= j``.

    Only the computed window is inspected. ``None`` means the expansions
    disagree at their last computed position.
    """
    if a.length != b.length:
        raise LengthMismatch(f"lengths {a.length} and {b.length} differ")
    diff = np.flatnonzero(a.bits != b.bits)
    if diff.size == 0:
        return 1
    last = int(diff[-1]) + 1
    return None if last == a.length else last + 1
