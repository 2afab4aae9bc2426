"""Exit criteria for the library, one test per criterion.

Run with ``pytest tests/test_acceptance.py``; the terminal summary lists one
PASS/FAIL line per criterion.
"""

import json
import random
import subprocess
import sys
from fractions import Fraction

import pytest

from surdnorm import (
    add_dyadic,
    apply_x_flips,
    build_lemma_points,
    chain_rule_check,
    compute_Mn,
    compute_Nr,
    decay_series,
    digits,
    eval_h_n,
    freq_series,
    frozen_prefix_delta,
    invariance_check,
    is_perfect_square,
    lambda_of,
    make_surd,
    minimal_scale,
    pinned_floor_sqrt,
    square_surd,
    tail_variants,
    total_diff_check,
    x_prefix_from_u_prefix,
)

from conftest import criterion
from oracles import PairOracle, bisect_isqrt, bits_of, box_of_fraction, brute_mn, brute_nr


def test_criterion_1_digit_engine():
    with criterion(1, "first 16 bits of sqrt(2) - 1", time_limit=1.0):
        r = bisect_isqrt(2 * 4**16)
        assert r == 92681 and r * r <= 2**33 < (r + 1) ** 2
        oracle_bits = format(r, "b")[1:]
        got = digits(lambda_of(2), 16).to_string()
        assert got == "0110101000001001" == oracle_bits


def test_criterion_2_simple_normality_evidence():
    with criterion(2, "|f_n - 1/2| <= 0.01 at n = 100000", time_limit=60.0):
        n = 100_000
        for s in (2, 3, 5, 6, 7, 8, 10):
            (point,) = freq_series(digits(lambda_of(s), n), [n])
            assert abs(point.f - Fraction(1, 2)) <= Fraction(1, 100), (s, float(point.f))


def test_criterion_3_tail_coincidence():
    with criterion(3, "squares of the paired points share a tail", time_limit=30.0):
        a, b = build_lemma_points(2, 2)
        da = digits(square_surd(a), 4096).bits
        db = digits(square_surd(b), 4096).bits
        assert (da[8:] == db[8:]).all()  # positions 9..4096
        for s in range(2, 51):
            if is_perfect_square(s):
                continue
            l = minimal_scale(s)
            a, b = build_lemma_points(s, l)
            da = digits(square_surd(a), 2048).bits
            db = digits(square_surd(b), 2048).bits
            assert (da[4 * l :] == db[4 * l :]).all(), s


def test_criterion_4_complement_duality():
    with criterion(4, "zeros of 1 - lambda equal ones of lambda"):
        L = 4096
        for s in (2, 3, 5):
            lam = lambda_of(s)
            ones = digits(lam, L).bits.cumsum()
            prime = digits(make_surd(1 - lam.p, -lam.q, s, lam.t), L).bits
            zeros = (1 - prime.astype(int)).cumsum()
            assert (ones == zeros).all(), s


def test_criterion_5_box_machinery():
    with criterion(5, "N_r and M_n values and monotonicity"):
        assert compute_Nr(lambda_of(2), 2) == 5
        assert compute_Nr(lambda_of(2), 4) == 7
        assert compute_Nr(lambda_of(3), 1) == 6
        for s in (2, 3, 5):
            lam = lambda_of(s)
            bits = bits_of(lam.p, lam.q, lam.s, lam.t, 600)
            values = [compute_Nr(lam, r) for r in range(1, 17)]
            assert values == [brute_nr(bits, r) for r in range(1, 17)]
            assert all(a <= b for a, b in zip(values, values[1:])), (s, values)
        nu = make_surd(3, -2, 2, 0)
        nu_bits = bits_of(3, -2, 2, 0, 200)
        assert compute_Mn(nu, 1) == 2 == brute_mn(nu_bits, 1)
        assert compute_Mn(nu, 3) == 5 == brute_mn(nu_bits, 3)


def test_criterion_6_prefix_determination_properties():
    with criterion(6, "random completions respect N_r and M_n"):
        rng = random.Random(20261016)
        failures = 0
        for s in (2, 3, 5):
            omega = lambda_of(s)
            for r in (1, 2, 4, 8):
                n = compute_Nr(omega, r)
                head = digits(omega, n - 1).to_int()
                target = digits(square_surd(omega), r).to_int()
                for _ in range(200):
                    extra = rng.randint(1, 64)
                    z = Fraction(head * 2**extra + rng.getrandbits(extra), 2 ** (n - 1 + extra))
                    failures += box_of_fraction(z * z, r) != target
            nu = square_surd(omega)
            for n in (1, 3, 6, 10):
                m = compute_Mn(nu, n)
                u = digits(nu, m)
                res = x_prefix_from_u_prefix(u.to_string(), n)
                assert res.determined and res.bit_string() == digits(omega, n).to_string()
                for _ in range(200):
                    extra = rng.randint(1, 80)
                    v = u.to_int() * 2**extra + rng.getrandbits(extra)
                    root = pinned_floor_sqrt(make_surd(v, 0, 2, m + extra), n)
                    failures += format(root, f"0{n}b") != res.bit_string()
        assert failures == 0


def _random_pairs(count: int, seed: int):
    rng = random.Random(seed)
    pairs = []
    while len(pairs) < count:
        s = rng.choice([2, 3, 5])
        omega = lambda_of(s)
        x = digits(omega, 12).to_string()
        positions = rng.sample(range(1, 13), rng.randint(1, 3))
        flips = {j: (1 if x[j - 1] == "0" else -1) for j in positions}
        pairs.append(apply_x_flips(omega, flips))
    return pairs


def test_criterion_7_telescoping():
    with criterion(7, "telescoping and linearity on 50 random pairs", time_limit=120.0):
        for pair in _random_pairs(50, seed=7):
            for n in (2, 4, 8, 16, 32):
                rep = total_diff_check(pair, n)
                total = rep.computed["delta_h_n"]
                assert rep.support_bound <= rep.predicted_support
                I = len(rep.entries)
                assert I >= rep.predicted_support
                for idx in range(max(rep.support_bound, 1), I + 1):
                    assert rep.partial_sums[idx - 1] == total
                linear = Fraction(sum(d for j, d in pair.flips if j <= n), n)
                assert total == linear
                assert rep.checks["telescoping"] and rep.verdict == "match"


@pytest.fixture(scope="module")
def canonical():
    return apply_x_flips(lambda_of(2), {1: 1})


@pytest.fixture(scope="module")
def canonical_oracle():
    return PairOracle(-1, 1, 2, 0, {1: 1}, L=800)


def _independent_hybrid(pair, oracle, i):
    """``H_i`` built digit by digit from the oracle's bit strings."""
    h = pair.nu1
    for j in range(1, i + 1):
        d = int(oracle.u[j - 1]) - int(oracle.u1[j - 1])
        if d:
            h = add_dyadic(h, d, j)
    return h


def test_criterion_8_verifiers_match_oracles(canonical, canonical_oracle):
    with criterion(8, "verifier outputs equal brute-force recomputation"):
        pair, oracle = canonical, canonical_oracle
        ns = range(1, 65)
        h_nu = {n: eval_h_n(pair.nu, n) for n in ns}
        for n in ns:
            assert h_nu[n] == oracle.h_nu(n)

        for n in ns:
            for j in range(1, 9):
                rep = chain_rule_check(pair, n, j)
                I_max = rep.extra["I_max"]
                assert rep.computed["sum"] == oracle.chain_sum(n, j, I_max)
                expected = Fraction(1, n) if j <= n else Fraction(0)
                assert rep.claim["expected"] == expected
                if pair.dx(j) == 0:
                    assert rep.verdict == "trivial"
                else:
                    assert rep.verdict == ("match" if rep.computed["sum"] == expected else "deviation")

        for k in (0, 1, 2):
            hyb = _independent_hybrid(pair, oracle, k)
            for n in ns:
                value = frozen_prefix_delta(pair, k, n)
                assert value == eval_h_n(hyb, n) - h_nu[n]
                assert value == oracle.h(k, n) - oracle.h_nu(n)

        n_list = list(ns)
        for k in (1, 2):
            rep = decay_series(pair, k, n_list)
            before = _independent_hybrid(pair, oracle, k - 1)
            after = _independent_hybrid(pair, oracle, k)
            expected = [eval_h_n(before, n) - eval_h_n(after, n) for n in n_list]
            assert [e.value for e in rep.entries] == expected
            assert expected == [oracle.partial_h(n, k) for n in n_list]
            assert rep.claim["source"] == "partial_difference_decay"
            assert rep.verdict in ("match", "deviation", "trivial")

        for k in (0, 1, 2):
            variants = tail_variants(pair.nu1, k)
            for n in (1, 2, 3, 5, 8, 13, 21, 34, 55, 64):
                rep = invariance_check(pair.nu, pair, k, n)
                expected = [oracle.variant_h(k, b, n) - oracle.h_nu(n) for b in range(1 << k)]
                assert [e.value for e in rep.entries] == expected
                assert expected == [eval_h_n(v, n) - h_nu[n] for v in variants]
                spread = max(expected) - min(expected)
                assert rep.computed["spread"] == spread
                assert rep.verdict == ("match" if spread == 0 else "deviation")

        # reports are exact and reproducible
        again = apply_x_flips(lambda_of(2), {1: 1})
        assert chain_rule_check(pair, 8, 1).to_json() == chain_rule_check(again, 8, 1).to_json()
        assert decay_series(pair, 2, n_list).to_json() == decay_series(again, 2, n_list).to_json()
        doc = json.loads(invariance_check(pair.nu, pair, 2, 64).to_json())
        assert all(set(e[2]) == {"num", "den"} for e in doc["entries"])


CLI_RUNS = [
    ["digits", "--s", "2", "--bits", "64"],
    ["freq", "--s", "2", "--n", "20000", "--stride", "1000"],
    ["lemma-points", "--s", "7"],
    ["tailmatch", "--s", "3", "--bits", "1024"],
    ["nr", "--s", "2", "--r", "4"],
    ["mn", "--s", "2", "--n", "3"],
    ["xprefix", "--u", "00101", "--n", "3"],
    ["pair", "--s", "3", "--flips", "2,5"],
    ["totaldiff", "--s", "2", "--flips", "1:+1", "--n", "8"],
    ["chain", "--s", "2", "--flips", "1:+1", "--n", "4", "--j", "1"],
    ["decay", "--s", "2", "--flips", "1:+1", "--k", "1"],
    ["invariance", "--s", "2", "--flips", "1:+1", "--k", "2", "--n", "16"],
]


def test_criterion_9_cli_determinism():
    with criterion(9, "every subcommand is byte-for-byte reproducible"):
        for argv in CLI_RUNS:
            outputs = [
                subprocess.run(
                    [sys.executable, "-m", "surdnorm", *argv],
                    capture_output=True,
                    check=True,
                ).stdout
                for _ in range(2)
            ]
            assert outputs[0] == outputs[1] and outputs[0], argv
