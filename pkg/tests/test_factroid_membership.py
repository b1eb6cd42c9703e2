import itertools

import pytest
from hypothesis import given
from hypothesis import strategies as st

from recipcomp.expr import RatFunc, add, mul
from recipcomp.factor import factor_exhaustive_gf, monic_candidates
from recipcomp.factroid import (
    EnumerationCapExceeded,
    colon_space,
    f1_step,
    factroid_closure,
    initial_space,
)
from recipcomp.linalg import span_of
from recipcomp.membership import (
    InCertificate,
    MemberConfig,
    OutCertificate,
    certificate_from_json,
    member,
    oracle_member_gf,
    verify_certificate,
)
from recipcomp.poly import Poly, parse_ring

from conftest import CUSP_GF2, CUSP_QQ, GF2x, GF3x, QQx, QQxy, polys


def span(*texts, ring):
    return span_of([ring(t) for t in texts], ring)


# -- F_1 and closures ---------------------------------------------------------------


def test_f1_examples():
    assert f1_step([QQx("x^2")], QQx).basis == span("1", "x", "x^2", ring=QQx)
    assert f1_step([CUSP_QQ("x^6")], CUSP_QQ).basis == span("1", "x^2", "x^3", "x^4", "x^6", ring=CUSP_QQ)
    assert f1_step([GF2x("x^2+x")], GF2x).basis == span("1", "x", "x^2+x", ring=GF2x)


def test_closure_examples():
    V = factroid_closure([GF2x("x^2+x")], GF2x)
    assert V.closed and V.dim == 3
    f = QQxy("x^3+y^2+x^4*y")
    V = factroid_closure([f], QQxy)
    assert V.closed and V.basis == span_of([QQxy.one, f])
    assert factroid_closure([QQx("7")], QQx).basis == span("1", ring=QQx)


def test_enumeration_cap():
    f = GF2x("x^4+x")
    with pytest.raises(EnumerationCapExceeded):
        factroid_closure([f], GF2x, exact=True, enum_cap=8)
    # without exact=True the closure falls back to pool steps and says so
    V = factroid_closure([f], GF2x, enum_cap=8)
    assert V.contains(f)


def _brute_f1(S, ring):
    """Independent F_1 over GF(p)[x]: enumerate the whole span and collect
    every monic divisor by trial division."""
    p = ring.field.p
    basis = span_of(S, ring).basis_polys()
    divs = [ring.one]
    cap = max(f.degree() for f in S)
    for cs in itertools.product(range(p), repeat=len(basis)):
        v = ring.zero
        for c, b in zip(cs, basis):
            v = v + b.scale(c)
        if not v or v.is_constant():
            continue
        for d in monic_candidates(ring, cap):
            if v.try_divexact(d) is not None:
                divs.append(d)
    return span_of(divs + list(S), ring)


@given(st.lists(polys(GF2x, 4, 3, nonconstant=True), min_size=1, max_size=2))
def test_f1_matches_brute_force(S):
    assert f1_step(S, GF2x).basis == _brute_f1(S, GF2x)


@given(st.lists(polys(GF3x, 3, 3, nonconstant=True), min_size=1, max_size=2), polys(GF3x, 3, 3, nonconstant=True))
def test_closure_laws(S, extra):
    V = factroid_closure(S, GF3x)
    assert V.closed
    assert all(V.contains(f) for f in S)
    # idempotent
    W = factroid_closure(V.polys(), GF3x, V.degree_cap)
    assert W.basis == V.basis
    # graded bound
    assert all(p.degree() <= max(f.degree() for f in S) for p in V.polys())
    # monotone
    big = factroid_closure(S + [extra], GF3x)
    assert all(big.contains(p) for p in V.polys())


def test_colon_examples():
    V = initial_space([QQx("1"), QQx("x")], QQx)
    assert colon_space(V, QQx("x")).basis == span("1", ring=QQx)
    assert colon_space(initial_space([QQx("x")], QQx), QQx("x")).basis == span("1", ring=QQx)
    R = parse_ring("GF(3)[x]")
    x = R("x")
    big = colon_space(factroid_closure([x * R("x^2")], R), x)
    small = factroid_closure([R("x^2")], R)
    assert all(big.contains(p) for p in small.polys())


@given(polys(GF3x, 2, 3, nonconstant=True), polys(GF3x, 2, 3, nonconstant=True))
def test_regularity_probe(g, c):
    c = c.monic()
    lhs = colon_space(factroid_closure([c * g], GF3x), c)
    rhs = factroid_closure([g], GF3x)
    assert all(lhs.contains(p) for p in rhs.polys())


# -- member ---------------------------------------------------------------------


def test_member_examples():
    v = member(QQxy("1"), QQxy("x"))
    assert v.is_in
    v = member(QQxy("x"), QQxy("y"))
    assert v.is_out and v.certificate == OutCertificate("weight", (1, 0), 0)
    assert member(QQxy("x"), QQxy("1")).is_out
    v = member(QQxy("x+y"), QQxy("x-y"))
    assert v.is_out and v.certificate.kind == "leading_form" and v.certificate.w == (1, 1)


def test_member_quartic_both_numerators():
    f = QQxy("x^3+y^2+x^4*y")
    for a in ("x", "y"):
        v = member(QQxy(a), f)
        assert v.is_in and verify_certificate(v, QQxy(a), f)


def test_member_shifted_leading_form():
    # (2x + 1)/x = 2 + 1/x, so the shift 2 is peeled off first
    v = member(QQxy("2*x+1"), QQxy("x"))
    assert v.is_in and verify_certificate(v, QQxy("2*x+1"), QQxy("x"))
    # (3x - y)/(x - y) = 2 + (x + y)/(x - y): a shifted certificate replays too
    a, b = QQxy("3*x-y"), QQxy("x-y")
    assert verify_certificate(OutCertificate("leading_form", (1, 1), 2), a, b)
    # (2x - 2y + 1)/(x - y) = 2 + 1/(x - y) is a member: no shift can exclude it
    a = QQxy("2*x-2*y+1")
    for lam in (0, 1, 2):
        assert not verify_certificate(OutCertificate("leading_form", (1, 1), lam), a, b)
        assert not verify_certificate(OutCertificate("weight", (1, 1), lam), a, b)


def test_member_unknown_is_not_out():
    v = member(QQxy("x^2"), QQxy("x^2+y^3"), config=MemberConfig(budget=5, c_cap=1))
    assert v.verdict in ("unknown", "in")
    if v.verdict == "unknown":
        assert v.certificate is None and v.caps


def test_member_rejects_zero_and_outside():
    with pytest.raises(ValueError):
        member(QQxy.zero, QQxy("x"))
    with pytest.raises(ValueError):
        member(Poly(CUSP_QQ, {(1,): 1}), CUSP_QQ("x^2"))


# -- replay ----------------------------------------------------------------------


def test_verify_examples():
    a, b = QQx("x"), QQx("x+1")
    v = member(a, b)
    assert verify_certificate(v, a, b)
    x, y = QQxy("x"), QQxy("y")
    assert verify_certificate(OutCertificate("weight", (1, 0)), x, y)
    assert not verify_certificate(OutCertificate("weight", (0, 1)), x, y)
    assert not verify_certificate(OutCertificate("leading_form", (1, 0)), QQxy("x+y"), QQxy("x-y"))


def test_certificate_json_roundtrip():
    f = QQxy("x^3+y^2+x^4*y")
    v = member(QQxy("y"), f)
    back = certificate_from_json(v.certificate.to_json(), QQxy)
    assert verify_certificate(back, QQxy("y"), f)
    w = member(QQxy("x+y"), QQxy("x-y"))
    assert verify_certificate(certificate_from_json(w.certificate.to_json(), QQxy), QQxy("x+y"), QQxy("x-y"))


def test_wrong_claim_is_rejected():
    v = member(QQx("x"), QQx("x+1"))
    assert not verify_certificate(v, QQx("x"), QQx("x+2"))


@given(polys(QQxy, 2, 3, nonzero=True), polys(QQxy, 2, 3, nonconstant=True))
def test_soundness_every_verdict_replays(a, b):
    v = member(a, b, config=MemberConfig(budget=150))
    if v.verdict != "unknown":
        assert verify_certificate(v, a, b)


@given(polys(QQx, 3, nonzero=True), polys(QQx, 3, nonconstant=True),
       polys(QQx, 3, nonzero=True), polys(QQx, 3, nonconstant=True))
def test_certificates_compose(a, b, c, d):
    va, vc = member(a, b), member(c, d)
    if not (va.is_in and vc.is_in):
        return
    s = add(va.certificate.expr, vc.certificate.expr)
    p = mul(va.certificate.expr, vc.certificate.expr)
    assert verify_certificate(InCertificate(s, RatFunc(a * d + c * b, b * d)), a * d + c * b, b * d)
    assert verify_certificate(InCertificate(p, RatFunc(a * c, b * d)), a * c, b * d)


# -- exhaustive oracle --------------------------------------------------------------


def _gf2_polys(max_deg):
    for d in range(1, max_deg + 1):
        for cs in itertools.product(range(2), repeat=d):
            yield Poly(GF2x, {**{(d,): 1}, **{(k,): 1 for k, c in enumerate(cs) if c}})


def test_univariate_law_against_oracle_deg3():
    ps = list(_gf2_polys(3))
    for a, b in itertools.product(ps, repeat=2):
        expect = a.degree() <= b.degree()
        v = member(a, b)
        assert v.is_in == expect and verify_certificate(v, a, b)
        assert (oracle_member_gf(a, b).verdict == "in") == expect


def test_oracle_cusp_examples():
    r = oracle_member_gf(CUSP_GF2("x^3"), CUSP_GF2("x^6"))
    assert r.verdict == "in" and verify_certificate(r.certificate, CUSP_GF2("x^3"), CUSP_GF2("x^6"))
    r = oracle_member_gf(CUSP_GF2("x^3"), CUSP_GF2("x^4"), c_cap=3)
    assert r.verdict == "out_at_bound"


def test_oracle_needs_prime_field():
    with pytest.raises(ValueError):
        oracle_member_gf(QQx("1"), QQx("x"))


def test_oracle_in_verdicts_replay():
    R = parse_ring("GF(2)[x,y]")
    for a, b in [("1", "x*y+x+y"), ("x", "x*y+x+y"), ("x*y", "x*y+x+y+1")]:
        r = oracle_member_gf(R(a), R(b), c_cap=2)
        if r.verdict == "in":
            assert verify_certificate(r.certificate, R(a), R(b))
            assert factor_exhaustive_gf(r.multiplier * R(b)).expand() == r.multiplier * R(b)
