"""Factroid spaces: linear spans closed under taking divisors."""

# %%
from recipcomp.factroid import colon_space, f1_step, factroid_closure
from recipcomp.poly import parse_ring

C = parse_ring("QQ[x;gens=x^2,x^3]")

# %% In K[x^2, x^3], x^3 divides x^6 even though x does not.
V = f1_step([C("x^6")], C)
print("F1(x^6) =", [str(p) for p in V.polys()])
print("contains x^3:", V.contains(C("x^3")))

# %% Closures are idempotent.
G = parse_ring("GF(2)[x]")
W = factroid_closure([G("x^2 + x")], G)
print("closure of x^2+x over GF(2):", [str(p) for p in W.polys()], "closed:", W.closed)

# %% Colon spaces divide a whole space by one polynomial.
print("(W : x) =", [str(p) for p in colon_space(W, G("x")).polys()])
