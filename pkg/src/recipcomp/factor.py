"""Factorizations: certified over GF(p), caller-supplied (or cheaply discovered)
over QQ.

Over a prime field the search is exhaustive.  Multivariate inputs are mapped to
one variable by a Kronecker substitution whose radix exceeds every partial
degree, factored there with sympy's finite-field routines, and every
sub-multiset of the univariate factors is pulled back and tried as an exact
divisor.  Any true factor of f shows up this way, so "no pulled-back divisor"
is a proof of irreducibility.  ``trial_divisor`` is the naive enumeration of
all monic candidates, kept as an independent check.
"""

from __future__ import annotations

import functools
import itertools
from dataclasses import dataclass
from fractions import Fraction
from math import gcd, lcm, prod

from sympy.polys.domains import ZZ
from sympy.polys.galoistools import gf_factor, gf_mul

from .field import MAX_PRIME, FieldSpec, _is_prime
from .poly import Poly, Ring, grlex_key

DEGREE_CAP = 8
SUBSET_CAP = 1 << 16


class CapExceeded(RuntimeError):
    """A configured search bound was hit; the result would not be certified."""


@dataclass(frozen=True)
class FactoredPoly:
    """``unit * prod(f**m for f, m in factors)``.

    ``complete`` is True when every factor is known to be irreducible."""

    ring: Ring
    unit: object
    factors: tuple
    complete: bool = True

    def expand(self) -> Poly:
        out = self.ring.const(self.unit)
        for f, m in self.factors:
            out = out * f ** m
        return out

    def __mul__(self, other: "FactoredPoly") -> "FactoredPoly":
        acc: dict = {}
        for f, m in self.factors + other.factors:
            acc[f] = acc.get(f, 0) + m
        return FactoredPoly(
            self.ring,
            self.ring.field.normalize(self.unit * other.unit),
            _sorted(acc),
            self.complete and other.complete,
        )

    def __pow__(self, e: int) -> "FactoredPoly":
        return FactoredPoly(
            self.ring,
            self.ring.field.normalize(self.unit ** e),
            tuple((f, m * e) for f, m in self.factors if e),
            self.complete,
        )

    def is_irreducible(self) -> bool:
        return self.complete and len(self.factors) == 1 and self.factors[0][1] == 1

    def __str__(self):
        fs = " * ".join(f"({f})" + (f"^{m}" if m > 1 else "") for f, m in self.factors)
        u = self.ring.field.fmt(self.unit)
        return fs if u == "1" and fs else (f"{u} * {fs}" if fs else u)

    @classmethod
    def from_factors(cls, ring: Ring, polys, complete=False) -> "FactoredPoly":
        """Bundle known (not necessarily irreducible) factors."""
        unit = ring.field.one
        acc: dict = {}
        for f in polys:
            if f.is_constant():
                unit = ring.field.normalize(unit * f.constant_coeff())
                continue
            unit = ring.field.normalize(unit * f.lc())
            g = f.monic()
            acc[g] = acc.get(g, 0) + 1
        return cls(ring, unit, _sorted(acc), complete)


def _sorted(acc: dict) -> tuple:
    return tuple(sorted(((f, m) for f, m in acc.items() if m), key=lambda fm: fm[0].sort_key()))


# -- finite fields ------------------------------------------------------------


def factor_exhaustive_gf(f: Poly, ring: Ring | None = None, degree_cap: int = DEGREE_CAP,
                         subset_cap: int = SUBSET_CAP) -> FactoredPoly:
    ring = ring or f.ring
    p = ring.field.p
    if not p:
        raise ValueError("exhaustive factorization needs a prime field")
    if not f:
        raise ValueError("cannot factor zero")
    if f.degree() > degree_cap:
        raise CapExceeded(f"total degree {f.degree()} exceeds cap {degree_cap}")
    unit = f.lc()
    g = f.monic()
    acc: dict = {}
    content = g.monomial_content()
    for i, e in enumerate(content):
        if e:
            acc[ring.var(i)] = e
    g = g.div_monomial(content)
    for h in _split(g, subset_cap):
        acc[h] = acc.get(h, 0) + 1
    return FactoredPoly(ring, unit, _sorted(acc), True)


def _split(g: Poly, subset_cap: int) -> list:
    """Monic irreducible factors of a monic, monomial-free g, with repetition."""
    if g.is_constant():
        return []
    if g.degree() == 1:
        return [g]
    key = (g.ring.field.p, g.ring.vars, frozenset(g.terms.items()))
    hit = _split_cache.get(key)
    if hit is not None:
        return [Poly(g.ring, h.terms, _clean=True) for h in hit]
    d = _kronecker_divisor(g, subset_cap)
    if d is None:
        out = [g]
    else:
        out = _split(d.monic(), subset_cap) + _split(g.divexact(d).monic(), subset_cap)
    _split_cache[key] = out
    return out


_split_cache: dict = {}


def _kronecker_divisor(g: Poly, subset_cap: int):
    p = g.ring.field.p
    n = g.ring.nvars
    radix = [g.deg_in(i) + 1 for i in range(n)]
    place = [prod(radix[:i]) for i in range(n)]
    top = sum((r - 1) * w for r, w in zip(radix, place))

    coeffs = [0] * (top + 1)
    for m, c in g.terms.items():
        coeffs[top - sum(e * w for e, w in zip(m, place))] = c
    while coeffs and coeffs[0] == 0:
        coeffs.pop(0)
    deg = len(coeffs) - 1
    _, ufacs = gf_factor([ZZ(c) for c in coeffs], p, ZZ)
    if sum(m for _, m in ufacs) <= 1:
        return None
    if prod(m + 1 for _, m in ufacs) > subset_cap:
        raise CapExceeded("too many univariate factor combinations")

    choices = []
    for ks in itertools.product(*(range(m + 1) for _, m in ufacs)):
        d = sum(k * (len(u) - 1) for k, (u, _) in zip(ks, ufacs))
        if 0 < d <= deg // 2:
            choices.append((d, ks))
    choices.sort()
    for _, ks in choices:
        poly = [ZZ(1)]
        for k, (u, _) in zip(ks, ufacs):
            for _ in range(k):
                poly = gf_mul(poly, u, p, ZZ)
        cand = _pull_back(poly, place, radix, g.ring)
        if cand is None or cand.is_constant():
            continue
        if g.try_divexact(cand) is not None:
            return cand
    return None


def _pull_back(upoly, place, radix, ring):
    terms = {}
    d = len(upoly) - 1
    for i, c in enumerate(upoly):
        if not c:
            continue
        k = d - i
        m = []
        for w, r in zip(reversed(place), reversed(radix)):
            m.append(k // w)
            k %= w
        m.reverse()
        if any(e >= r for e, r in zip(m, radix)):
            return None
        terms[tuple(m)] = int(c)
    return Poly(ring, terms)


def monic_candidates(ring: Ring, max_deg: int, box=None):
    """All monic polynomials of total degree 1..max_deg inside ``box``
    (per-variable degree bounds), by increasing degree then grlex."""
    p = ring.field.p
    n = ring.nvars
    box = box or (max_deg,) * n
    monos = [m for m in _monomials_upto(n, max_deg) if all(e <= b for e, b in zip(m, box))]
    monos.sort(key=grlex_key)
    for lead_idx, lead in enumerate(monos):
        if sum(lead) == 0:
            continue
        lower = monos[:lead_idx]
        for cs in itertools.product(range(p), repeat=len(lower)):
            t = {lead: 1}
            t.update((m, c) for m, c in zip(lower, cs) if c)
            yield Poly(ring, t, _clean=True)


def trial_divisor(f: Poly, limit: int = 1 << 20):
    """Naive exhaustive search for a monic divisor of degree <= deg(f)/2.

    Returns a divisor or None (then f is irreducible).  Independent of the
    Kronecker route; used as a cross-check."""
    ring = f.ring
    box = tuple(f.deg_in(i) for i in range(ring.nvars))
    count = 0
    for cand in monic_candidates(ring, f.degree() // 2, box):
        count += 1
        if count > limit:
            raise CapExceeded("trial division candidate limit")
        if f.try_divexact(cand) is not None:
            return cand
    return None


@functools.lru_cache(maxsize=None)
def _monomials_upto(n: int, d: int) -> tuple:
    if n == 0:
        return ((),)
    out = []
    for e in range(d + 1):
        for rest in _monomials_upto(n - 1, d - e):
            out.append((e,) + rest)
    return tuple(out)


def monomials_upto(n: int, d: int) -> list:
    return sorted(_monomials_upto(n, d), key=grlex_key)


# -- divisors -----------------------------------------------------------------


def divisors_in_ring(fp: FactoredPoly, ring: Ring | None = None) -> list:
    """Monic divisors d of f with both d and f/d inside the ring D."""
    ring = ring or fp.ring
    facs = fp.factors
    out = []
    for ks in itertools.product(*(range(m + 1) for _, m in facs)):
        d = ring.one
        for k, (f, _) in zip(ks, facs):
            if k:
                d = d * f ** k
        co = ring.one
        for k, (f, m) in zip(ks, facs):
            if m - k:
                co = co * f ** (m - k)
        if ring.contains(d) and ring.contains(co):
            out.append(Poly(ring, d.terms, _clean=True))
    out.sort(key=Poly.sort_key)
    return out


# -- rationals ----------------------------------------------------------------


def integer_primitive(f: Poly):
    """Scale a QQ polynomial to a primitive integer one; returns (scale, terms)."""
    den = lcm(*(Fraction(c).denominator for c in f.terms.values()))
    ints = {m: int(Fraction(c) * den) for m, c in f.terms.items()}
    g = 0
    for v in ints.values():
        g = gcd(g, v)
    return Fraction(den, g), {m: v // g for m, v in ints.items()}


def irreducible_mod_p(f: Poly, primes=None, degree_cap: int = DEGREE_CAP):
    """Certify irreducibility of f over QQ by reduction modulo a prime.

    Returns a prime p such that the primitive integer multiple of f keeps its
    total degree mod p and is irreducible over GF(p); None if no listed prime
    works.  Validity: a factorization over QQ gives one over ZZ (Gauss), and
    it survives reduction with both degrees intact."""
    if f.ring.field.p:
        raise ValueError("expects a polynomial over QQ")
    if f.is_constant():
        return None
    _, ints = integer_primitive(f)
    primes = primes or [q for q in range(2, MAX_PRIME + 1) if _is_prime(q)]
    d = f.degree()
    for q in primes:
        ring_q = Ring(FieldSpec(q), f.ring.vars)
        g = Poly(ring_q, ints)
        if g.degree() != d:
            continue
        try:
            if factor_exhaustive_gf(g, ring_q, degree_cap).is_irreducible():
                return q
        except CapExceeded:
            return None
    return None


def is_irreducible_certified(f: Poly):
    """True / False when decided with a certificate, None when unknown."""
    if f.is_constant():
        return False
    if f.degree() == 1:
        return True
    if f.ring.field.p:
        return factor_exhaustive_gf(f).is_irreducible()
    c = f.monomial_content()
    if any(c):
        return False
    return True if irreducible_mod_p(f) else None


def factor_known(f: Poly, hints=(), ring: Ring | None = None) -> FactoredPoly:
    """Best-effort factorization without a general algorithm.

    Over GF(p) this is ``factor_exhaustive_gf``.  Over QQ it pulls out the
    monomial content, every hint and every x_i + s for small s (repeatedly),
    then certifies what is left by ``irreducible_mod_p`` where possible.  ``complete`` reports whether
    each remaining factor is certified irreducible."""
    ring = ring or f.ring
    if ring.field.p:
        try:
            return factor_exhaustive_gf(f, ring)
        except CapExceeded:
            return FactoredPoly(ring, f.lc(), ((f.monic(), 1),), False)
    unit = f.lc()
    g = f.monic()
    acc: dict = {}
    content = g.monomial_content()
    for i, e in enumerate(content):
        if e:
            acc[ring.var(i)] = e
    g = g.div_monomial(content)
    work = [g]
    shifts = [ring.var(i) + s for i in range(ring.nvars) for s in (1, -1, 2, -2, 3, -3)]
    for h in list(hints) + shifts:
        if h.is_constant():
            continue
        h = h.monic()
        nxt = []
        for w in work:
            while not w.is_constant() and w != h:
                q = w.try_divexact(h)
                if q is None:
                    break
                acc[h] = acc.get(h, 0) + 1
                w = q.monic()
            nxt.append(w)
        work = nxt
    complete = True
    for w in work:
        if w.is_constant():
            continue
        acc[w] = acc.get(w, 0) + 1
    for h in acc:
        if h.degree() > 1 and not irreducible_mod_p(h):
            complete = False
    return FactoredPoly(ring, unit, _sorted(acc), complete)
