"""
Binary digits of sqrt(s) and their running frequency
=====================================================

Digits come out exact: the library pins ``floor(2**n * x)`` with integer
square roots, so there is no rounding anywhere.
"""

# %%
import numpy as np

from surdnorm import digits, freq_series, lambda_of, make_surd

lam = lambda_of(2)          # sqrt(2) - 1
print(lam, float(lam))
print(digits(lam, 64))

# %%
# Frequency of ones along the expansion. At 10**5 digits every radicand
# below is within a percent of 1/2.
n = 100_000
for s in (2, 3, 5, 6, 7, 8, 10):
    e = digits(lambda_of(s), n)
    pts = freq_series(e, [10, 100, 1_000, 10_000, n])
    print(s, [f"{float(p.f):.4f}" for p in pts])

# %%
# The running deviation |f_n - 1/2| scaled by sqrt(n), for a rough look at
# the fluctuation size.
e = digits(lam, n)
counts = np.cumsum(e.bits, dtype=np.int64)
idx = np.arange(1, n + 1)
dev = np.abs(counts / idx - 0.5) * np.sqrt(idx)
print("max scaled deviation past n=1000:", dev[1000:].max())

# %%
# 1 - lambda has the complementary digits, so its zeros track lambda's ones.
prime = make_surd(1 - lam.p, -lam.q, lam.s, lam.t)
ep = digits(prime, 32)
print(digits(lam, 32))
print(ep)
