"""Deciding whether a/b lies in R(D), with certificates that replay."""

# %%
from recipcomp.membership import member, oracle_member_gf, verify_certificate
from recipcomp.poly import parse_ring

R = parse_ring("QQ[x,y]")
f = R("x^3 + y^2 + x^4*y")

# %% y/f is a member: the certificate is an expression built from reciprocals.
v = member(R("y"), f)
print(v.verdict, "|", v.certificate.expr)
print("replays:", verify_certificate(v, R("y"), f))

# %% x/y is not: a weight vector shows the numerator outgrows the denominator.
v = member(R("x"), R("y"))
print(v.verdict, "|", v.certificate)
print("replays:", verify_certificate(v, R("x"), R("y")))

# %% Over a finite field, an exhaustive search gives independent answers.
C = parse_ring("GF(2)[x;gens=x^2,x^3]")
r = oracle_member_gf(C("x^3"), C("x^6"))
print("x^3/x^6 in the cusp ring:", r.verdict, "multiplier", r.multiplier)
