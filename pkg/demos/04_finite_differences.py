"""
Partial differences of the digit frequency
==========================================

Flip some digits of omega, square both points, and split the change in the
frequency of ones into contributions from each digit of the square.
"""

# %%
from surdnorm import (
    apply_x_flips,
    chain_rule_check,
    decay_series,
    digits,
    invariance_check,
    lambda_of,
    total_diff_check,
)

pair = apply_x_flips(lambda_of(2), {1: +1})
print("omega1 =", pair.omega1, " nu1 =", pair.nu1)

rep = total_diff_check(pair, 8)
print("total change:", rep.computed["delta_h_n"])
print("nonzero terms up to coordinate", rep.support_bound, "(bound", rep.predicted_support, ")")
print(rep.checks)

# %%
# The partial difference in the first square digit, as n grows.
d = decay_series(pair, 1, [2**i for i in range(1, 13)])
for e in d.entries:
    print(f"n={e.index:5d}  {e.value}")
print("verdict:", d.verdict)

# %%
# Chain-rule sums. With one flip they equal 1/n; with several flips the
# canonical hybrid ordering does not always reproduce 1/n, and the report
# says so.
omega = lambda_of(3)
x = digits(omega, 10).to_string()
multi = apply_x_flips(omega, {j: (1 if x[j - 1] == "0" else -1) for j in (2, 5, 9)})
for n in (2, 8, 32):
    for j in (2, 5, 9):
        r = chain_rule_check(multi, n, j)
        print(n, j, r.computed["sum"], "expected", r.claim["expected"], r.verdict)

# %%
# Spread of the frequency change over the 2**k prefixes of nu1.
for k in (1, 2, 3):
    r = invariance_check(pair.nu, pair, k, 256)
    print(k, [str(e.value) for e in r.entries], "spread", r.computed["spread"])
