"""Finite differences of digit frequencies on perturbation pairs.

A perturbation pair flips finitely many binary digits of ``omega`` to get
``omega1``; ``nu`` and ``nu1`` are their squares. Everything is exact: the
flips are dyadic shifts, so all four points stay quadratic surds, and the
frequency ``h_n`` is a multiple of ``1/n``.

Partial differences are taken at hybrid points. In the square's digits,
``H_i`` agrees with ``nu`` at positions ``1..i`` and with ``nu1`` beyond, so
``H_0 = nu1`` and ``H_i -> nu``. The partial difference in coordinate ``i``
is ``h_n(H_{i-1}) - h_n(H_i)`` and these telescope to
``h_n(nu1) - h_n(nu)``. The same construction on ``omega``'s digits gives
``G_j`` and the partial differences of the square's digits with respect to
the root's digits.

The verifiers for the chain-rule sum, the decay of a fixed partial
difference, and the tail invariance do not assert anything. They compute
exact values and label how those values compare with the expected ones.
"""

from __future__ import annotations

import functools
import json
from collections.abc import Iterable, Mapping, Sequence
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any

from .bigint_core import pinned_floor, pinned_floor_sqrt
from .boxes import compute_Mn, nr_from_floors, default_nr_cap
from .errors import InconsistentFlip, OutOfRange
from .expansion import QuadraticSurd, add_dyadic, square_surd

I_MAX_CAP = 4096
MAX_VARIANT_PREFIX = 16

HYBRID_CONVENTION = (
    "partial differences at canonical hybrids: d h_n / d U_i uses points that "
    "take coordinates 1..i-1 from nu and the rest from nu1 (minus the point "
    "that takes 1..i from nu); d U_i / d X_j uses the same ordering on the "
    "root digits, from omega1 towards omega; quotients with a zero step are 0"
)


@dataclass(frozen=True)
class PerturbationPair:
    """``omega`` and ``omega1 = omega + sum(d * 2**-j for j, d in flips)``."""

    omega: QuadraticSurd
    flips: tuple[tuple[int, int], ...]
    omega1: QuadraticSurd
    nu: QuadraticSurd
    nu1: QuadraticSurd

    def dx(self, j: int) -> int:
        for jj, d in self.flips:
            if jj == j:
                return d
        return 0

    def describe(self) -> dict[str, Any]:
        return {
            "s": self.omega.s,
            "omega": self.omega.as_dict(),
            "flips": [[j, d] for j, d in self.flips],
        }


def _rat(x: Fraction | int) -> dict[str, str]:
    x = Fraction(x)
    return {"num": str(x.numerator), "den": str(x.denominator)}


def _jsonable(v: Any) -> Any:
    if isinstance(v, Fraction):
        return _rat(v)
    if isinstance(v, dict):
        return {k: _jsonable(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_jsonable(x) for x in v]
    return v


@dataclass(frozen=True)
class Entry:
    index: int
    du: int | None
    value: Fraction


@dataclass
class DifferenceReport:
    """Exact tables of differences plus labelled comparisons.

    ``entries`` hold ``(index, dU, value)``; what the index runs over depends
    on ``op`` (a coordinate, an ``n``, or a variant pattern). ``verdict`` is
    derived from the exact values and is one of ``"match"``, ``"deviation"``
    or ``"trivial"``.
    """

    op: str
    pair: dict[str, Any]
    n: int | None
    entries: list[Entry]
    partial_sums: list[Fraction]
    claim: dict[str, Any]
    computed: dict[str, Any]
    verdict: str
    checks: dict[str, bool] = field(default_factory=dict)
    support_bound: int | None = None
    predicted_support: int | None = None
    convention: str = HYBRID_CONVENTION
    extra: dict[str, Any] = field(default_factory=dict)

    def to_dict(self) -> dict[str, Any]:
        return {
            "op": self.op,
            "pair": self.pair,
            "n": self.n,
            "entries": [[e.index, e.du, _rat(e.value)] for e in self.entries],
            "partial_sums": [_rat(x) for x in self.partial_sums],
            "claim": _jsonable(self.claim),
            "computed": _jsonable(self.computed),
            "verdict": self.verdict,
            "checks": dict(self.checks),
            "support_bound": self.support_bound,
            "predicted_support": self.predicted_support,
            "convention": self.convention,
            "extra": _jsonable(self.extra),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), separators=(",", ":"))


def _check_unit(x: QuadraticSurd, what: str) -> None:
    if pinned_floor(x, 0) != 0 or (x.is_rational and x.p == 0):
        raise OutOfRange(f"{what} = {x} is not in (0, 1)")


def _digit(x: QuadraticSurd, i: int) -> int:
    return pinned_floor(x, i) & 1


def apply_x_flips(
    omega: QuadraticSurd, flips: Mapping[int, int] | Iterable[tuple[int, int]]
) -> PerturbationPair:
    """Flip the listed digits of ``omega``.

    A ``+1`` may only be applied where the digit is 0 and a ``-1`` only where
    it is 1, so the result is again a valid digit string.
    """
    _check_unit(omega, "omega")
    items = list(flips.items()) if isinstance(flips, Mapping) else list(flips)
    seen: dict[int, int] = {}
    for j, d in items:
        if j < 1:
            raise ValueError(f"digit positions start at 1, got {j}")
        if d not in (-1, 1):
            raise ValueError(f"flip direction must be +1 or -1, got {d}")
        if j in seen:
            raise ValueError(f"position {j} flipped twice")
        seen[j] = d
    omega1 = omega
    for j, d in sorted(seen.items()):
        bit = _digit(omega, j)
        if (d == 1 and bit == 1) or (d == -1 and bit == 0):
            raise InconsistentFlip(f"digit {j} of omega is {bit}, cannot apply {d:+d}")
        omega1 = add_dyadic(omega1, d, j)
    _check_unit(omega1, "omega1")
    nu, nu1 = square_surd(omega), square_surd(omega1)
    if nu.is_rational or nu1.is_rational:
        raise OutOfRange("the squares of both points must be irrational")
    return PerturbationPair(omega, tuple(sorted(seen.items())), omega1, nu, nu1)


@functools.lru_cache(maxsize=1 << 16)
def eval_h_n(nu_point: QuadraticSurd, n: int) -> Fraction:
    """Frequency of ones among the first ``n`` digits of ``sqrt(nu_point)``."""
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    _check_unit(nu_point, "nu")
    return Fraction(bin(pinned_floor_sqrt(nu_point, n)).count("1"), n)


def delta_u(pair: PerturbationPair, I_max: int) -> list[tuple[int, int]]:
    """Digit changes ``u1_i - u_i`` of the square for ``i = 1..I_max``."""
    if I_max < 1:
        return []
    a = pinned_floor(pair.nu, I_max)
    b = pinned_floor(pair.nu1, I_max)
    return [
        (i, ((b >> (I_max - i)) & 1) - ((a >> (I_max - i)) & 1))
        for i in range(1, I_max + 1)
    ]


def hybrid_point(pair: PerturbationPair, i: int) -> QuadraticSurd:
    """``nu1`` with its first ``i`` digits replaced by those of ``nu``."""
    if i < 0:
        raise ValueError(f"hybrid index must be >= 0, got {i}")
    if i == 0:
        return pair.nu1
    return add_dyadic(pair.nu1, pinned_floor(pair.nu, i) - pinned_floor(pair.nu1, i), i)


def x_hybrid_point(pair: PerturbationPair, j: int) -> QuadraticSurd:
    """``omega1`` with its first ``j`` digits replaced by those of ``omega``."""
    if j < 0:
        raise ValueError(f"hybrid index must be >= 0, got {j}")
    if j == 0:
        return pair.omega1
    return add_dyadic(
        pair.omega1, pinned_floor(pair.omega, j) - pinned_floor(pair.omega1, j), j
    )


def partial_diff_h(pair: PerturbationPair, n: int, i: int) -> Fraction:
    """``h_n(H_{i-1}) - h_n(H_i)``; zero when digit ``i`` does not change."""
    if i < 1:
        raise ValueError(f"coordinate index must be >= 1, got {i}")
    if _digit(pair.nu, i) == _digit(pair.nu1, i):
        return Fraction(0)
    return eval_h_n(hybrid_point(pair, i - 1), n) - eval_h_n(hybrid_point(pair, i), n)


def partial_dU_dX(pair: PerturbationPair, i: int, j: int) -> Fraction:
    """``(U_i(G_{j-1}) - U_i(G_j)) / dx_j``, read as 0 when ``dx_j = 0``."""
    dx = pair.dx(j)
    if dx == 0:
        return Fraction(0)
    before = _digit(square_surd(x_hybrid_point(pair, j - 1)), i)
    after = _digit(square_surd(x_hybrid_point(pair, j)), i)
    return Fraction(before - after, dx)


def default_i_max(n: int, predicted: int | None) -> int:
    return min(4 * max(n, predicted or 0), I_MAX_CAP)


def _h_quotient(dh: Fraction, du: int) -> Fraction:
    # dh / du with du in {-1, 0, 1}; 0/0 counts as 0
    return dh * du


def _predicted_support(pair: PerturbationPair, n: int) -> int:
    return compute_Mn(pair.nu, n)


def total_diff_check(
    pair: PerturbationPair, n: int, I: int | None = None
) -> DifferenceReport:
    """Tabulate the partial differences of ``h_n`` and check the total.

    Checks that the running sums telescope to ``h_n(nu1) - h_n(H_I')`` for
    every ``I'``, that no partial difference survives past the prefix length
    that pins ``n`` root digits of ``nu``, and that the total equals
    ``sum(dx_j for j <= n) / n``.
    """
    predicted = _predicted_support(pair, n)
    I = default_i_max(n, predicted) if I is None else I
    h_hyb = [eval_h_n(hybrid_point(pair, i), n) for i in range(I + 1)]
    h_nu, h_nu1 = eval_h_n(pair.nu, n), h_hyb[0]
    total = h_nu1 - h_nu

    entries, sums = [], []
    running = Fraction(0)
    telescopes = True
    for i, du in delta_u(pair, I):
        dh = h_hyb[i - 1] - h_hyb[i] if du else Fraction(0)
        entries.append(Entry(i, du, dh))
        running += dh
        sums.append(running)
        telescopes &= running == h_nu1 - h_hyb[i]
    nonzero = [e.index for e in entries if e.value != 0]
    observed = max(nonzero) if nonzero else 0
    linear = Fraction(sum(d for j, d in pair.flips if j <= n), n)

    checks = {
        "telescoping": telescopes,
        "support_within_prediction": observed <= predicted,
        "sum_equals_total": I < predicted or running == total,
        "linear_in_root_digits": total == linear,
    }
    return DifferenceReport(
        op="totaldiff",
        pair=pair.describe(),
        n=n,
        entries=entries,
        partial_sums=sums,
        claim={
            "source": "total_difference",
            "statement": "sum_i dh_n/dU_i * dU_i = h_n(nu1) - h_n(nu), "
            "finitely many nonzero terms",
            "expected": total,
        },
        computed={"delta_h_n": total, "sum": running, "linear_prediction": linear},
        verdict="match" if all(checks.values()) else "deviation",
        checks=checks,
        support_bound=observed,
        predicted_support=predicted,
        extra={"I": I},
    )


def chain_rule_check(
    pair: PerturbationPair, n: int, j: int, I_max: int | None = None
) -> DifferenceReport:
    """Exact ``sum_i (dh_n/dU_i) * (dU_i/dX_j)`` against ``1/n`` or ``0``.

    The expected value is ``1/n`` for ``j <= n`` and ``0`` otherwise. When
    digit ``j`` is not flipped every term is 0 and the verdict is
    ``"trivial"``.
    """
    predicted = _predicted_support(pair, n)
    I_max = default_i_max(n, predicted) if I_max is None else I_max
    expected = Fraction(1, n) if j <= n else Fraction(0)
    entries, sums = [], []
    running = Fraction(0)
    dx = pair.dx(j)
    for i, du in delta_u(pair, I_max):
        term = Fraction(0)
        if dx and du:
            term = _h_quotient(partial_diff_h(pair, n, i), du) * partial_dU_dX(pair, i, j)
        entries.append(Entry(i, du, term))
        running += term
        sums.append(running)
    if dx == 0:
        verdict = "trivial"
    else:
        verdict = "match" if running == expected else "deviation"
    return DifferenceReport(
        op="chain",
        pair=pair.describe(),
        n=n,
        entries=entries,
        partial_sums=sums,
        claim={
            "source": "chain_rule_sum",
            "statement": "sum_i dh_n/dU_i * dU_i/dX_j = 1/n for j <= n, 0 for j > n",
            "expected": expected,
        },
        computed={"sum": running, "j": j, "dx_j": dx},
        verdict=verdict,
        predicted_support=predicted,
        extra={"I_max": I_max},
    )


def tail_variants(nu: QuadraticSurd, k: int) -> list[QuadraticSurd]:
    """All ``2**k`` points sharing ``nu``'s digits past position ``k``.

    Ordered by the replacement prefix read as a binary integer.
    """
    if not 0 <= k <= MAX_VARIANT_PREFIX:
        raise ValueError(f"k must be in 0..{MAX_VARIANT_PREFIX}, got {k}")
    _check_unit(nu, "nu")
    head = pinned_floor(nu, k)
    return [add_dyadic(nu, b - head, k) for b in range(1 << k)]


def frozen_prefix_delta(pair: PerturbationPair, k: int, n: int) -> Fraction:
    """``h_n(H_k) - h_n(nu)``: the change when the first ``k`` square digits
    are held at ``nu``'s values."""
    return eval_h_n(hybrid_point(pair, k), n) - eval_h_n(pair.nu, n)


def _halves(values: Sequence[Fraction]) -> tuple[Fraction, Fraction]:
    mid = len(values) // 2
    first = max((abs(v) for v in values[:mid]), default=Fraction(0))
    second = max((abs(v) for v in values[mid:]), default=Fraction(0))
    return first, second


def decay_series(
    pair: PerturbationPair, k: int, n_list: Sequence[int]
) -> DifferenceReport:
    """The partial difference in square digit ``k`` as ``n`` grows.

    The verdict is ``"match"`` when the largest magnitude over the later half
    of ``n_list`` is zero or strictly below that of the earlier half; this is
    finite evidence only.
    """
    du = dict(delta_u(pair, k)).get(k, 0) if k >= 1 else 0
    entries, sums = [], []
    running = Fraction(0)
    for n in n_list:
        v = partial_diff_h(pair, n, k)
        entries.append(Entry(n, du, v))
        running += v
        sums.append(running)
    first, second = _halves([e.value for e in entries])
    if du == 0:
        verdict = "trivial"
    else:
        verdict = "match" if second == 0 or second < first else "deviation"
    return DifferenceReport(
        op="decay",
        pair=pair.describe(),
        n=None,
        entries=entries,
        partial_sums=sums,
        claim={
            "source": "partial_difference_decay",
            "statement": "dh_{n,k} -> 0 as n grows; probed by comparing halves of n_list",
            "expected": Fraction(0),
        },
        computed={"k": k, "first_half_max": first, "second_half_max": second},
        verdict=verdict,
        extra={"n_list": list(n_list)},
    )


def invariance_check(
    nu: QuadraticSurd, pair: PerturbationPair, k: int, n: int
) -> DifferenceReport:
    """Spread of ``h_n(v) - h_n(nu)`` over the ``2**k`` prefix variants ``v``
    of ``nu1``.

    Also reports the largest number of root digits needed to pin the first
    ``k`` square digits, taken over the variants.
    """
    variants = tail_variants(pair.nu1, k)
    base = eval_h_n(nu, n)
    entries = [Entry(b, None, eval_h_n(v, n) - base) for b, v in enumerate(variants)]
    values = [e.value for e in entries]
    spread = max(values) - min(values)
    sums, running = [], Fraction(0)
    for v in values:
        running += v
        sums.append(running)
    n_bound = None
    if k >= 1:
        n_bound = max(
            nr_from_floors(functools.partial(pinned_floor_sqrt, v), k, default_nr_cap(k))
            for v in variants
        )
    return DifferenceReport(
        op="invariance",
        pair=pair.describe(),
        n=n,
        entries=entries,
        partial_sums=sums,
        claim={
            "source": "tail_invariance",
            "statement": "the limiting difference does not depend on the first k "
            "square digits; probed at a single finite n",
            "expected": Fraction(0),
        },
        computed={"spread": spread, "min": min(values), "max": max(values), "k": k},
        verdict="match" if spread == 0 else "deviation",
        extra={
            "nu": nu.as_dict(),
            "root_digit_bound_max_over_variants": n_bound,
        },
    )
