"""The reproduction suite: ten checks with exact tolerances.

Each ``criterion_k`` returns a ``Check``.  Every certificate produced along
the way is logged in a ``Ledger`` so that criterion 10 can replay all of
them, and then mutate them to make sure the replay actually bites.
"""

from __future__ import annotations

import itertools
import random
import time
from dataclasses import dataclass, field
from fractions import Fraction

from .expr import Add, Mul, RatFunc, Recip, Scalar, add, mul
from .factor import monic_candidates
from .factroid import f1_step
from .linalg import span_of
from .membership import InCertificate, OutCertificate, certificate_from_json, member, oracle_member_gf, verify_certificate
from .poly import Poly, Ring, parse_ring
from .primes import (
    FAILS,
    irred_conditions_report,
    linalg2_witness,
    monomial_prime_lattice,
    verify_lattice,
    verify_linalg2,
)
from .recip import (
    INF,
    NotInW,
    UnitFractionSum,
    decompose_expr,
    distinctify,
    expr_to_sum,
    greedy_egyptian_rational,
    invert_unit,
    is_unit_graded,
    to_ratfunc,
    ufs,
    valuation_graded,
)


@dataclass
class Check:
    number: int
    title: str
    ok: bool
    detail: str = ""
    seconds: float = 0.0

    def line(self) -> str:
        tag = "PASS" if self.ok else "FAIL"
        return f"{tag}  [{self.number:2d}] {self.title}  ({self.detail}; {self.seconds:.2f}s)"


@dataclass
class Ledger:
    """Certificates collected for the soundness sweep: (cert, a, b, ring)."""

    entries: list = field(default_factory=list)

    def add(self, cert, a, b, ring):
        self.entries.append((cert, a, b, ring))


def random_poly(ring: Ring, max_deg: int, rng: random.Random, nonconstant=True, max_terms=4) -> Poly:
    """A random polynomial of total degree <= max_deg with a few terms."""
    fld = ring.field
    monos = [m for m in _monos(ring.nvars, max_deg) if ring.monomial_in_D(m)]
    while True:
        k = rng.randint(1, max_terms)
        terms = {}
        for m in rng.sample(monos, min(k, len(monos))):
            c = rng.randrange(1, fld.p) if fld.p else Fraction(rng.choice([-3, -2, -1, 1, 2, 3]), rng.choice([1, 1, 2]))
            terms[m] = c
        f = Poly(ring, terms)
        if f and (not nonconstant or not f.is_constant()):
            return f


def _monos(n, d):
    if n == 0:
        return [()]
    return [(e,) + r for e in range(d + 1) for r in _monos(n - 1, d - e)]


# wall-clock bounds in seconds; criterion 2 checks its two parts itself
TIME_LIMITS = {1: 1.0, 3: 120.0, 5: 60.0, 6: 30.0, 7: 10.0}


def _timed(fn):
    def wrapper(*args, **kwargs):
        t0 = time.perf_counter()
        chk = fn(*args, **kwargs)
        chk.seconds = time.perf_counter() - t0
        limit = TIME_LIMITS.get(chk.number)
        if limit is not None and chk.seconds >= limit:
            chk.ok = False
            chk.detail += f"; over the {limit:g}s limit"
        return chk

    wrapper.__name__ = fn.__name__
    wrapper.__doc__ = fn.__doc__
    return wrapper


def _inverse_cert(s: UnitFractionSum, r: UnitFractionSum, ledger: Ledger):
    rf = to_ratfunc(s)
    if r.certificate is not None:
        ledger.add(InCertificate(r.certificate, RatFunc(rf.den, rf.num)), rf.den, rf.num, s.ring)


def _product_one(s: UnitFractionSum, r: UnitFractionSum) -> bool:
    v = s.value() * r.value()
    return v.num == v.den()


@_timed
def criterion_1(ledger: Ledger, seed: int = 0) -> Check:
    """1 + 1/f inverts to 1 - 1/(f+1)."""
    rng = random.Random(seed)
    bad = []
    cases = [(parse_ring("GF(5)[x,y]"), 3, 50), (parse_ring("QQ[x]"), 3, 10)]
    for ring, deg, count in cases:
        for _ in range(count):
            f = random_poly(ring, deg, rng)
            s = UnitFractionSum(ring, (ring.one, f))
            r = invert_unit(s)
            expected = sorted([ring.one, -(f + 1)], key=Poly.sort_key)
            got = sorted(r.denominators, key=Poly.sort_key)
            if got != expected or not _product_one(s, r):
                bad.append(str(f))
            _inverse_cert(s, r, ledger)
    return Check(1, "inverse of 1 + 1/f is 1 - 1/(f+1)", not bad, f"60 cases, {len(bad)} mismatches")


@_timed
def criterion_2(ledger: Ledger) -> Check:
    """Inverses of 1 + 1/x + 1/y and 1 + 1/x + 1/y + 1/z."""
    R2 = parse_ring("QQ[x,y]")
    t0 = time.perf_counter()
    s2 = ufs(R2, ["1", "x", "y"])
    r2 = invert_unit(s2)
    t2 = time.perf_counter() - t0
    ok2 = _product_one(s2, r2) and len(r2) <= 10 and t2 < 5
    _inverse_cert(s2, r2, ledger)
    R3 = parse_ring("QQ[x,y,z]")
    t0 = time.perf_counter()
    s3 = ufs(R3, ["1", "x", "y", "z"])
    r3 = invert_unit(s3)
    ok3 = _product_one(s3, r3)
    t3 = time.perf_counter() - t0
    ok3 = ok3 and t3 < 60
    _inverse_cert(s3, r3, ledger)
    detail = f"2 vars: {len(r2)} terms in {t2:.2f}s; 3 vars: {len(r3)} terms in {t3:.2f}s"
    return Check(2, "unit inversion in 2 and 3 variables", ok2 and ok3, detail)


@_timed
def criterion_3(ledger: Ledger) -> Check:
    """Over GF(2)[x]: a/b in R iff deg a <= deg b, for all degrees 1..4."""
    ring = parse_ring("GF(2)[x]")
    polys = [f for f in monic_candidates(ring, 4)]
    disagree = unknown = 0
    for a in polys:
        for b in polys:
            expected = a.degree() <= b.degree()
            v = member(a, b, ring)
            o = oracle_member_gf(a, b, ring)
            if v.verdict == "unknown":
                unknown += 1
            if v.is_in != expected or (o.verdict == "in") != expected:
                disagree += 1
            if v.certificate is not None:
                ledger.add(v.certificate, a, b, ring)
            if o.certificate is not None:
                ledger.add(o.certificate, a, b, ring)
    n = len(polys) ** 2
    return Check(3, "univariate degree law over GF(2)[x]", disagree == 0 and unknown == 0,
                 f"{n} pairs, {disagree} disagreements, {unknown} unknown")


def _nu(rf, ring):
    v = valuation_graded(rf, ring)
    return None if isinstance(v, NotInW) else v.value


@_timed
def criterion_4(ledger: Ledger, seed: int = 4) -> Check:
    """The degree valuation on R(GF(3)[x])."""
    ring = parse_ring("GF(3)[x]")
    rng = random.Random(seed)

    def sample():
        b = random_poly(ring, 4, rng)
        a = random_poly(ring, b.degree(), rng, nonconstant=False)
        return RatFunc(a, b)

    bad = 0
    for _ in range(100):
        al, be = sample(), sample()
        na, nb = _nu(al, ring), _nu(be, ring)
        prod = _nu(al * be, ring)
        s = al + be
        ns = _nu(s, ring)
        if na is None or nb is None or prod != na + nb:
            bad += 1
        elif ns is None or not (ns is INF or ns >= min(na, nb)):
            bad += 1
    return Check(4, "valuation laws on GF(3)[x]", bad == 0, f"100 pairs, {bad} violations")


@_timed
def criterion_5(ledger: Ledger) -> Check:
    """The monomial prime lattice for n = 2, 3."""
    ok = True
    notes = []
    for n in (2, 3):
        rep = monomial_prime_lattice(n)
        ring = parse_ring(rep["ring"])
        names = _names(ring)
        heights = all(nd["height"] == n - names[nd["J"]].degree() for nd in rep["nodes"])
        e1 = all(p["e"] == 1 for p in rep["pairs"] if p["status"] == "holds")
        good = rep["anti_isomorphic"] and rep["unknown"] == 0 and heights and e1 and verify_lattice(rep, ring)
        ok = ok and good
        notes.append(f"n={n}: {len(rep['pairs'])} pairs, {rep['unknown']} unknown")
        for p in rep["pairs"]:
            f, g = names[p["sup"]], names[p["sub"]]
            ge = ring.one
            for cj in p["certificates"]:
                ge = ge * g
                ledger.add(certificate_from_json(cj, ring), f, ge, ring)
    return Check(5, "monomial prime lattice, n = 2 and 3", ok, "; ".join(notes))


def _names(ring):
    out = {}
    for k in range(ring.nvars + 1):
        for J in itertools.combinations(range(ring.nvars), k):
            f = ring.one
            for i in J:
                f = f * ring.var(i)
            out["{" + ",".join(ring.vars[i] for i in J) + "}"] = f
    return out


def associate_route(ring: Ring):
    """1/(xy+x+y) = (1/x)(1/y) θ with θ a product of explicit units.

    1/f = 1/(f+1) (1 + 1/f), f + 1 = (x+1)(y+1) and
    1/(x+1) = (1/x)(1 - 1/(x+1)); likewise for y."""
    x, y = ring.var("x"), ring.var("y")
    f = x * y + x + y
    one = Scalar(ring.field.one, ring)
    units = [
        add(one, Recip(f)),
        add(one, Recip(-(x + 1))),
        add(one, Recip(-(y + 1))),
    ]
    theta = mul(*units)
    return f, theta, units


@_timed
def criterion_6(ledger: Ledger) -> Check:
    """Four replays of worked examples."""
    R = parse_ring("QQ[x,y]")
    parts = {}

    # (a) associates
    f, theta, units = associate_route(R)
    x, y = R.var("x"), R.var("y")
    lhs = mul(Recip(x), Recip(y), theta).value()
    ok_a = lhs.num * f == lhs.den() and (x + 1) * (y + 1) == f + 1
    for u in units:
        s = UnitFractionSum(R, tuple(_as_dens(u, R)))
        ok_a = ok_a and is_unit_graded(s)
        r = invert_unit(s)
        ok_a = ok_a and _product_one(s, r)
        _inverse_cert(s, r, ledger)
    cert = InCertificate(mul(Recip(x), Recip(y), theta), RatFunc(R.one, f))
    ok_a = ok_a and verify_certificate(cert, R.one, f, R)
    ledger.add(cert, R.one, f, R)
    parts["a"] = ok_a

    # (b) y/f via 1/f = (1/y)(1/(y+x^4)) θ^{-1}, θ = 1 + x^3/(y(y+x^4))
    g = R("x^3+y^2+x^4*y")
    yx4 = R("y+x^4")
    t_expr = decompose_expr(R("x^3"), y * yx4, R)
    t_cert = InCertificate(t_expr, RatFunc(R("x^3"), y * yx4))
    theta_b = UnitFractionSum(R, tuple(_as_dens(add(Scalar(R.field.one, R), t_expr), R)))
    inv = invert_unit(theta_b)
    y_over_f = mul(Recip(yx4), inv.certificate)
    cert_b = InCertificate(y_over_f, RatFunc(y, g))
    v = member(y, g, R)
    ok_b = (
        verify_certificate(t_cert, R("x^3"), y * yx4, R)
        and is_unit_graded(theta_b)
        and _product_one(theta_b, inv)
        and verify_certificate(cert_b, y, g, R)
        and v.is_in
        and verify_certificate(v, y, g, R)
        and not span_of([R.one, g]).contains(y)
    )
    for c, a_, b_ in ((t_cert, R("x^3"), y * yx4), (cert_b, y, g)):
        ledger.add(c, a_, b_, R)
    ledger.add(v.certificate, y, g, R)
    parts["b"] = ok_b

    # (c) x^3 in F_1(x^6) inside K[x^2, x^3]
    D = parse_ring("QQ[x;gens=x^2,x^3]")
    x6, x3 = D("x^6"), D("x^3")
    F = f1_step([x6], D)
    e = F.express(x3)
    plain = span_of([D("1"), D("x^2"), D("x^4"), x6])
    ok_c = F.contains(x3) and not plain.contains(x3) and e is not None
    if e is not None:
        c_cert = InCertificate(e, RatFunc(x3, x6))
        ok_c = ok_c and verify_certificate(c_cert, x3, x6, D)
        ledger.add(c_cert, x3, x6, D)
    parts["c"] = ok_c

    # (d) condition (4) fails at u = 1 for xy + x + y
    rep = irred_conditions_report(f, R)
    c4 = rep["4"]
    ok_d = c4.status == FAILS and c4.witness["u"] == "1"
    parts["d"] = ok_d

    detail = ", ".join(f"({k}) {'ok' if v else 'FAILED'}" for k, v in parts.items())
    return Check(6, "worked example replays", all(parts.values()), detail)


def _as_dens(e, ring):
    """Denominators of the flattened expression."""
    return expr_to_sum(e, ring).denominators


@_timed
def criterion_7(ledger: Ledger) -> Check:
    R = parse_ring("QQ[x,y]")
    f, g = R("y+x^2"), R("y+x")
    w = linalg2_witness(f, g, R, 0)
    x = R.var(0)
    fu = w.follow_up
    ok = (w.N <= 3 and bool(w.h) and w.h.try_divexact(x) is not None and fu is not None and fu.is_in
          and verify_linalg2(w, f, g, 0))
    if fu is not None and fu.certificate is not None:
        ledger.add(fu.certificate, x, (f * g) ** w.N, R)
    return Check(7, "linalg2 witness for (y+x^2, y+x)", ok, f"N={w.N}, h={w.h}")


@_timed
def criterion_8(ledger: Ledger, seed: int = 8) -> Check:
    ring = parse_ring("GF(5)[x,y]")
    rng = random.Random(seed)
    bad = failures = 0
    for _ in range(100):
        base = [random_poly(ring, 2, rng, nonconstant=rng.random() < 0.8) for _ in range(rng.randint(1, 4))]
        dens = base + [rng.choice(base) for _ in range(rng.randint(1, 4))]
        s = UnitFractionSum(ring, tuple(dens))
        try:
            d = distinctify(s, budget=10_000)
        except Exception:
            failures += 1
            continue
        same = s.value()
        other = d.value()
        if len(set(d.denominators)) != len(d.denominators) or same.num * other.den() != other.num * same.den():
            bad += 1
    return Check(8, "distinct denominators", bad == 0 and failures == 0,
                 f"100 sums, {bad} bad, {failures} budget failures")


@_timed
def criterion_9(ledger: Ledger, seed: int = 9) -> Check:
    ok = greedy_egyptian_rational(Fraction(4, 17)) == [5, 29, 1233, 3039345]
    rng = random.Random(seed)
    bad = 0
    for _ in range(500):
        den = rng.randint(2, 500)
        q = Fraction(rng.randint(1, den - 1), den)
        ns = greedy_egyptian_rational(q)
        if sum(Fraction(1, n) for n in ns) != q or any(a >= b for a, b in zip(ns, ns[1:])):
            bad += 1
    return Check(9, "greedy Egyptian fractions", ok and bad == 0, f"4/17 {'ok' if ok else 'wrong'}, 500 samples, {bad} bad")


def mutate(cert: InCertificate) -> InCertificate:
    """Perturb one coefficient: the constant term of the first reciprocal
    leaf, or the first scalar when there is no reciprocal."""
    done = [False]

    def walk(e):
        if done[0]:
            return e
        if isinstance(e, Recip):
            done[0] = True
            d = e.d + 1
            return Recip(d if d else e.d + 2)
        if isinstance(e, Scalar):
            done[0] = True
            return Scalar(e.ring.field(e.c + 1), e.ring)
        if isinstance(e, Add):
            return Add(tuple(walk(t) for t in e.terms))
        if isinstance(e, Mul):
            return Mul(tuple(walk(t) for t in e.factors))
        return e

    return InCertificate(walk(cert.expr), cert.claimed)


@_timed
def criterion_10(ledger: Ledger) -> Check:
    bad = survived = mutated = 0
    for cert, a, b, ring in ledger.entries:
        if not verify_certificate(cert, a, b, ring):
            bad += 1
        if isinstance(cert, InCertificate):
            mutated += 1
            if verify_certificate(mutate(cert), a, b, ring):
                survived += 1
    # an Out certificate with the wrong weight must be rejected as well
    R = parse_ring("QQ[x,y]")
    wrong = verify_certificate(OutCertificate("weight", (0, 1)), R("x"), R("y"), R)
    n = len(ledger.entries)
    ok = n > 0 and bad == 0 and survived == 0 and not wrong
    return Check(10, "soundness sweep and mutation", ok,
                 f"{n} certificates, {bad} rejected, {survived}/{mutated} mutants accepted")


CRITERIA = [criterion_1, criterion_2, criterion_3, criterion_4, criterion_5, criterion_6, criterion_7, criterion_8,
            criterion_9]


def run_all(echo=print) -> list:
    ledger = Ledger()
    out = []
    for fn in CRITERIA + [criterion_10]:
        chk = fn(ledger)
        out.append(chk)
        if echo:
            echo(chk.line())
    return out
