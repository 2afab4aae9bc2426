"""
Two points whose squares end the same way
=========================================

For nonsquare s and 2**l > s, the points 1 - sqrt(s)/4**l and
(sqrt(s) - 1)/2**l have squares differing by a dyadic rational with
denominator 2**(4l), so their binary expansions coincide past digit 4l.
"""

# %%
from surdnorm import build_lemma_points, digits, first_tail_agreement, minimal_scale, square_surd

s, l = 2, 2
a, b = build_lemma_points(s, l)
print(a, "|", b)
da, db = digits(square_surd(a), 48), digits(square_surd(b), 48)
print(da)
print(db)
print("agree from position", first_tail_agreement(da, db))

# %%
# Across all nonsquares up to 50 the agreement always starts by 4l + 1.
for s in range(2, 51):
    if int(s**0.5) ** 2 == s:
        continue
    l = minimal_scale(s)
    a, b = build_lemma_points(s, l)
    j = first_tail_agreement(digits(square_surd(a), 4096), digits(square_surd(b), 4096))
    print(f"s={s:2d} l={l} 4l={4 * l:2d} first agreement={j}")
