import os
import sys
from fractions import Fraction

import sympy
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from recipcomp.poly import Poly, parse_ring

settings.register_profile("default", max_examples=60, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.register_profile("thorough", max_examples=400, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))

QQxy = parse_ring("QQ[x,y]")
QQx = parse_ring("QQ[x]")
GF2x = parse_ring("GF(2)[x]")
GF3x = parse_ring("GF(3)[x]")
GF5xy = parse_ring("GF(5)[x,y]")
GF3xy = parse_ring("GF(3)[x,y]")
CUSP_QQ = parse_ring("QQ[x;gens=x^2,x^3]")
CUSP_GF2 = parse_ring("GF(2)[x;gens=x^2,x^3]")


def monomials(nvars, max_deg):
    if nvars == 1:
        return [(k,) for k in range(max_deg + 1)]
    return [(i, j) for i in range(max_deg + 1) for j in range(max_deg + 1 - i)]


def coeffs_for(ring):
    p = ring.field.p
    if p:
        return st.integers(0, p - 1)
    return st.builds(Fraction, st.integers(-4, 4), st.integers(1, 3))


def polys(ring, max_deg=3, max_terms=4, nonzero=False, nonconstant=False):
    """Random polynomials of total degree <= max_deg."""
    monos = [m for m in monomials(ring.nvars, max_deg) if ring.monomial_in_D(m)]
    terms = st.dictionaries(st.sampled_from(monos), coeffs_for(ring), max_size=max_terms)
    s = terms.map(lambda t: Poly(ring, t))
    if nonzero:
        s = s.filter(bool)
    if nonconstant:
        s = s.filter(lambda f: f and not f.is_constant())
    return s


def to_sympy(f):
    """An independent view of a Poly as a sympy expression."""
    syms = sympy.symbols(f.ring.vars)
    out = sympy.Integer(0)
    for m, c in f.terms.items():
        c = sympy.Rational(int(c.numerator), int(c.denominator)) if isinstance(c, Fraction) else sympy.Integer(int(c))
        out += c * sympy.Mul(*[s ** e for s, e in zip(syms, m)])
    return sympy.expand(out)


def sympy_poly(f):
    syms = sympy.symbols(f.ring.vars)
    p = f.ring.field.p
    if p:
        return sympy.Poly(to_sympy(f), *syms, modulus=p)
    return sympy.Poly(to_sympy(f), *syms, domain="QQ")


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    lines = getattr(mod, "LINES", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
