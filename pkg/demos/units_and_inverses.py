"""Units of R(D) written as sums of reciprocals, and how to invert them."""

# %% Sums of reciprocals are the basic objects.
from recipcomp.poly import parse_ring
from recipcomp.recip import (
    distinctify, invert_unit, is_unit_graded, product_is_one, to_ratfunc, ufs,
)

R = parse_ring("QQ[x,y]")
s = ufs(R, ["1", "x", "y"])
print("s          =", s)
print("as a ratio =", to_ratfunc(s))
print("unit?      =", is_unit_graded(s))

# %% 1 + 1/f has the two-term inverse 1 - 1/(f+1).
f = R("x^2*y + 3")
inv = invert_unit(ufs(R, [R.one, f]))
print("inverse of 1 + 1/f:", inv)

# %% A three-term unit needs more terms; the product is still exactly 1.
inv = invert_unit(s)
print(f"inverse of s has {len(inv)} terms:", inv)
print("s * inverse == 1:", product_is_one(s, inv))

# %% Repeated denominators can always be split apart.
print("1/x + 1/x ->", distinctify(ufs(parse_ring("QQ[x]"), ["x", "x"])))
