"""
How many digits pin how many digits
===================================

``compute_Nr`` counts the digits of omega that fix the first r digits of
omega**2; ``compute_Mn`` counts the digits of nu that fix the first n digits
of sqrt(nu).
"""

# %%
from surdnorm import compute_Mn, compute_Nr, digits, lambda_of, square_surd, x_prefix_from_u_prefix

for s in (2, 3, 5):
    lam = lambda_of(s)
    print(s, "N_r, r=1..16:", [compute_Nr(lam, r) for r in range(1, 17)])

# %%
for s in (2, 3, 5):
    nu = square_surd(lambda_of(s))
    print(s, "M_n, n=1..16:", [compute_Mn(nu, n) for n in range(1, 17)])

# %%
# Reading root digits off a prefix of the square's digits: the answer is
# "undetermined" until the prefix is long enough.
nu = square_surd(lambda_of(2))
u = digits(nu, 12).to_string()
for m in range(1, 9):
    res = x_prefix_from_u_prefix(u[:m], 3)
    print(u[:m].ljust(8), res.determined, res.bit_string())
