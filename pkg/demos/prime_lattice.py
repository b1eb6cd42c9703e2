"""Primes of R(K[x_1..x_n]) generated by monomials, and related witnesses."""

# %%
from recipcomp.poly import parse_ring
from recipcomp.primes import (
    irred_conditions_report, linalg2_witness, monomial_prime_lattice, verify_lattice,
)

R = parse_ring("QQ[x,y,z]")
rep = monomial_prime_lattice(3, R, e_max=2)
print("anti-isomorphic to the subset lattice:", rep["anti_isomorphic"])
print("every containment replays:", verify_lattice(rep, R))
for node in rep["nodes"]:
    print(f"  {node['J']:>9}  height {node['height']}")

# %% The DOT graph can be piped into graphviz.
print(rep["dot"].splitlines()[0], "...")

# %% A dependency among f^i g^j yields a multiple of x in the right span.
S = parse_ring("QQ[x,y]")
w = linalg2_witness(S("y + x^2"), S("y + x"), S, 0)
print("N =", w.N, " h =", w.h, " follow-up:", w.follow_up.verdict)

# %% How far xy + x + y is from being irreducible in R.
for key, entry in irred_conditions_report(S("x*y + x + y")).items():
    if hasattr(entry, "status"):
        print(f"  ({key}) {entry.status}")
