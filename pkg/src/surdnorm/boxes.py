"""Dyadic r-boxes and the two prefix-determination searches.

An r-box is ``[k/2**r, (k+1)/2**r)``; its index ``k`` is the first ``r``
binary digits of any member read as an integer.

* :func:`compute_Nr` finds how many digits of ``omega`` pin the first ``r``
  digits of ``omega**2``.
* :func:`compute_Mn` finds how many digits of ``nu`` pin the first ``n``
  digits of ``sqrt(nu)``.
"""

from __future__ import annotations

import math
from collections.abc import Callable, Sequence
from dataclasses import dataclass

from .bigint_core import pinned_floor
from .errors import OutOfRange, SearchExhausted
from .expansion import QuadraticSurd


@dataclass(frozen=True)
class BoxIndex:
    """The box ``[k/2**r, (k+1)/2**r)``.

    ``k`` may equal ``2**r`` for values at or above 1; it is never clamped.
    """

    r: int
    k: int

    def contains_k_over(self) -> str:
        return f"[{self.k}/2^{self.r}, {self.k + 1}/2^{self.r})"


@dataclass(frozen=True)
class PrefixDetermination:
    determined: bool
    x_prefix: tuple[int, ...] | None
    witness_m: int

    def bit_string(self) -> str | None:
        if self.x_prefix is None:
            return None
        return "".join(map(str, self.x_prefix))


def default_nr_cap(r: int) -> int:
    return 64 * r + 64


def default_mn_cap(n: int) -> int:
    return 64 * n + 64


def box_index(x: QuadraticSurd, r: int) -> BoxIndex:
    if pinned_floor(x, 0) < 0:
        raise OutOfRange(f"{x} is negative")
    return BoxIndex(r, pinned_floor(x, r))


def same_box(a: QuadraticSurd, b: QuadraticSurd, r: int) -> bool:
    return box_index(a, r) == box_index(b, r)


def _check_unit(x: QuadraticSurd) -> None:
    # 0 < x < 1
    if pinned_floor(x, 0) != 0 or (x.is_rational and x.p == 0):
        raise OutOfRange(f"{x} is not in (0, 1)")


def nr_from_floors(floor_at: Callable[[int], int], r: int, cap: int) -> int:
    """Smallest ``n > 1`` whose truncation endpoints square into one r-box.

    ``floor_at(m)`` must return ``floor(omega * 2**m)``. With
    ``a = floor_at(n - 1)``, the truncation is ``a / 2**(n-1)`` and the two
    endpoints are ``a`` and ``a + 1`` over ``2**(n-1)``.
    """
    for n in range(2, cap + 1):
        a = floor_at(n - 1)
        shift = 2 * (n - 1)
        if ((a * a) << r) >> shift == (((a + 1) * (a + 1)) << r) >> shift:
            return n
    raise SearchExhausted(f"no N_r <= {cap} for r={r}")


def compute_Nr(omega: QuadraticSurd, r: int, cap: int | None = None) -> int:
    """Number of leading digits after which ``omega``'s digits fix the
    first ``r`` digits of ``omega**2``.

    Returns the minimal ``n > 1`` such that ``w**2`` and ``(w + 2**-(n-1))**2``
    fall in the same r-box, where ``w`` is ``omega`` truncated to ``n - 1``
    digits.
    """
    _check_unit(omega)
    if r < 1:
        raise ValueError(f"r must be >= 1, got {r}")
    cap = default_nr_cap(r) if cap is None else cap
    return nr_from_floors(lambda m: pinned_floor(omega, m), r, cap)


def _sqrt_box(u: int, m: int, n: int) -> int | None:
    """Box ``c`` with ``sqrt([u/2**m, (u+1)/2**m])`` inside ``[c, c+1] / 2**n``."""
    c = math.isqrt((u << (2 * n)) >> m)
    if (u + 1) << (2 * n) <= ((c + 1) * (c + 1)) << m:
        return c
    return None


def compute_Mn(nu: QuadraticSurd, n: int, cap: int | None = None) -> int:
    """Shortest prefix of ``nu``'s digits that fixes ``n`` digits of ``sqrt(nu)``.

    The test is closed containment of ``sqrt`` of the prefix interval in a
    closed n-box; ``nu`` is irrational so it sits strictly inside the
    interval and any point sharing the prefix has the same ``n`` root digits.
    """
    _check_unit(nu)
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    cap = default_mn_cap(n) if cap is None else cap
    for m in range(1, cap + 1):
        if _sqrt_box(pinned_floor(nu, m), m, n) is not None:
            return m
    raise SearchExhausted(f"no M_n <= {cap} for n={n}")


def x_prefix_from_u_prefix(u_prefix: Sequence[int] | str, n: int) -> PrefixDetermination:
    """Resolve the first ``n`` root digits from a digit prefix of the square."""
    bits = [int(b) for b in u_prefix]
    if any(b not in (0, 1) for b in bits):
        raise ValueError("prefix must contain only 0 and 1")
    m = len(bits)
    u = int("".join(map(str, bits)), 2) if bits else 0
    c = _sqrt_box(u, m, n)
    if c is None:
        return PrefixDetermination(False, None, m)
    prefix = tuple(int(ch) for ch in format(c, f"0{n}b")) if n else ()
    return PrefixDetermination(True, prefix, m)
