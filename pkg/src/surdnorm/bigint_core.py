"""Exact integer kernels: integer square roots and pinned floors of surds.

Every digit the library reports comes out of :func:`pinned_floor` or
:func:`pinned_floor_sqrt`. Both return ``floor(value * 2**n)`` exactly; for
irrational values the integer is found by interval refinement, for dyadic
rationals it is computed directly because an interval can never decide a
floor that sits exactly on an integer.

The functions here accept any object exposing integer attributes ``p``,
``q``, ``s`` and ``t`` meaning ``(p + q*sqrt(s)) / 2**t``; in practice that is
:class:`surdnorm.expansion.QuadraticSurd`.
"""

from __future__ import annotations

import contextlib
import contextvars
import math
from collections.abc import Callable, Iterator
from typing import Protocol

from .errors import PrecisionExhausted

INITIAL_GUARD_BITS = 64
DEFAULT_GUARD_BIT_CAP = 1 << 21

_guard_cap: contextvars.ContextVar[int] = contextvars.ContextVar(
    "surdnorm_guard_cap", default=DEFAULT_GUARD_BIT_CAP
)


class SurdLike(Protocol):
    p: int
    q: int
    s: int
    t: int


@contextlib.contextmanager
def guard_bit_cap(cap: int) -> Iterator[None]:
    """Temporarily change the guard-bit cap used by the pinned floors.

    The setting is held in a :mod:`contextvars` variable, so it is local to
    the current thread or task.
    """
    if cap < 1:
        raise ValueError(f"guard-bit cap must be positive, got {cap}")
    token = _guard_cap.set(cap)
    try:
        yield
    finally:
        _guard_cap.reset(token)


def current_guard_bit_cap() -> int:
    return _guard_cap.get()


def isqrt(v: int) -> int:
    """Largest ``r`` with ``r*r <= v``."""
    if v < 0:
        raise ValueError(f"isqrt of negative value {v}")
    return math.isqrt(v)


def is_perfect_square(v: int) -> bool:
    if v < 0:
        return False
    r = math.isqrt(v)
    return r * r == v


def _floor_mul_sqrt(b: int, s: int) -> int:
    # floor(b*sqrt(s)) for nonsquare s; exact since b*sqrt(s) is never an integer when b != 0
    r = math.isqrt(b * b * s)
    return r if b >= 0 else -r - 1


def _scaled_bounds(x: SurdLike, e: int) -> tuple[int, int]:
    """Integers ``lo < hi`` with ``lo <= value(x) * 2**e < hi`` (``q != 0``)."""
    a = x.p << e
    fb = _floor_mul_sqrt(x.q << e, x.s)
    # a + q*2**e*sqrt(s) lies strictly inside (a + fb, a + fb + 1)
    lo = (a + fb) >> x.t
    hi = -((-(a + fb + 1)) >> x.t)
    return lo, hi


def _pin(bounds: Callable[[int], tuple[int, int]]) -> int:
    """Refine ``bounds(g)`` until ``floor(true / 2**g)`` is unambiguous.

    ``bounds(g)`` returns integers with ``lo <= true_value * 2**g < hi``.
    """
    cap = _guard_cap.get()
    g = min(INITIAL_GUARD_BITS, cap)
    while True:
        lo, hi = bounds(g)
        a, b = lo >> g, (hi - 1) >> g
        if a == b:
            return a
        if g >= cap:
            raise PrecisionExhausted(
                f"floor not pinned with {g} guard bits (cap {cap})"
            )
        g = min(2 * g, cap)


def pinned_floor(x: SurdLike, n: int) -> int:
    """Exact ``floor(value(x) * 2**n)``.

    >>> from surdnorm.expansion import make_surd
    >>> pinned_floor(make_surd(-1, 1, 2, 0), 3)
    3
    """
    if n < 0:
        raise ValueError(f"scale must be nonnegative, got {n}")
    if x.q == 0:
        return (x.p << n) >> x.t
    return _pin(lambda g: _scaled_bounds(x, n + g))


def pinned_floor_sqrt(x: SurdLike, n: int) -> int:
    """Exact ``floor(sqrt(value(x)) * 2**n)`` for ``value(x) >= 0``."""
    if n < 0:
        raise ValueError(f"scale must be nonnegative, got {n}")
    if pinned_floor(x, 0) < 0:
        raise ValueError("square root of a negative value")
    if x.q == 0:
        e = 2 * n - x.t
        # floor(sqrt(y)) == isqrt(floor(y)) for y >= 0
        return math.isqrt(x.p << e if e >= 0 else x.p >> -e)

    def bounds(g: int) -> tuple[int, int]:
        ylo, yhi = _scaled_bounds(x, 2 * (n + g))
        return math.isqrt(max(ylo, 0)), math.isqrt(yhi) + 1

    return _pin(bounds)
