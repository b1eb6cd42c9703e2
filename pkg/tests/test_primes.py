import itertools

import pytest

from recipcomp.expr import RatFunc, Recip, mul
from recipcomp.factor import FactoredPoly
from recipcomp.membership import InCertificate, OutCertificate, verify_certificate
from recipcomp.poly import parse_ring
from recipcomp.primes import (
    CHAIN,
    L_of_pf_truncated,
    Linalg2Fail,
    chain_consistent,
    irred_conditions_report,
    linalg2_witness,
    monomial_prime_lattice,
    p_of_W_member,
    prime_contains,
    pseudoradical_member_2var,
    verify_lattice,
    verify_linalg2,
)

from conftest import CUSP_QQ, QQxy


# -- containments -------------------------------------------------------------------


def test_prime_contains_examples():
    x, xy = QQxy("x"), QQxy("x*y")
    v = prime_contains(xy, x)
    assert v.status == "holds" and v.e == 1
    assert verify_certificate(v.verdicts[-1], x, xy)

    v = prime_contains(x, xy, e_max=4)
    assert v.status == "fails" and len(v.verdicts) == 4
    for e, ve in enumerate(v.verdicts, 1):
        assert isinstance(ve.certificate, OutCertificate)
        assert verify_certificate(ve, xy, x ** e)

    v = prime_contains(QQxy("x^2"), x)
    assert v.status == "holds" and v.e == 1


def test_prime_contains_rejects_constants():
    with pytest.raises(ValueError):
        prime_contains(QQxy("3"), QQxy("x"))


def _subset(ring, J):
    out = ring.one
    for i in J:
        out = out * ring.var(i)
    return out


def test_containment_transitive_on_monomials():
    R = parse_ring("QQ[x,y,z]")
    subsets = [J for k in range(1, 4) for J in itertools.combinations(range(3), k)]
    holds = {}
    for J, K in itertools.product(subsets, repeat=2):
        holds[J, K] = prime_contains(_subset(R, J), _subset(R, K), e_max=2).status == "holds"
    for A, B, C in itertools.product(subsets, repeat=3):
        if holds[A, B] and holds[B, C]:
            assert holds[A, C]


# -- the monomial lattice --------------------------------------------------------------


@pytest.mark.parametrize("n", [1, 2, 3])
def test_lattice_is_anti_isomorphic(n):
    R = parse_ring("QQ[" + ",".join("xyz"[:n]) + "]")
    rep = monomial_prime_lattice(n, R, e_max=2)
    assert rep["anti_isomorphic"] and rep["unknown"] == 0
    assert verify_lattice(rep, R)
    heights = {node["J"]: node["height"] for node in rep["nodes"]}
    assert heights["{}"] == n
    for node in rep["nodes"]:
        size = 0 if node["J"] == "{}" else node["J"].count(",") + 1
        assert node["height"] == n - size
    assert rep["dot"].startswith("digraph")


def test_lattice_n2_shape():
    rep = monomial_prime_lattice(2, QQxy)
    edges = {(e["from"], e["to"]) for e in rep["edges"]}
    assert edges == {("{x}", "{}"), ("{y}", "{}"), ("{x,y}", "{x}"), ("{x,y}", "{y}")}


def test_lattice_parallel_matches_serial():
    R = parse_ring("QQ[x,y,z]")
    a = monomial_prime_lattice(3, R, e_max=2, jobs=1)
    b = monomial_prime_lattice(3, R, e_max=2, jobs=2)
    assert a == b


# -- pseudoradical -------------------------------------------------------------------------


def test_pseudoradical_examples():
    v = pseudoradical_member_2var(QQxy("x*y"))
    assert v.status == "yes" and set(map(str, v.factors)) == {"x", "y"}
    assert pseudoradical_member_2var(QQxy("x^2")).status == "no"
    G = parse_ring("GF(2)[x,y]")
    assert pseudoradical_member_2var(G("x^2+x")).status == "yes"


def test_pseudoradical_needs_two_variables():
    with pytest.raises(ValueError):
        pseudoradical_member_2var(parse_ring("QQ[x,y,z]")("x*y"))


def test_pseudoradical_bad_factorization_is_rejected():
    bogus = FactoredPoly.from_factors(QQxy, [QQxy("x"), QQxy("y+1")], complete=True)
    with pytest.raises(ValueError):
        pseudoradical_member_2var(QQxy("x*y"), factored=bogus)


def test_pseudoradical_route_for_xy():
    # 1/(xy) = (1/x)(1/y) lies in both principal ideals (1/x)R and (1/y)R
    x, y = QQxy("x"), QQxy("y")
    e = mul(Recip(x), Recip(y))
    assert verify_certificate(InCertificate(e, RatFunc(QQxy.one, x * y)), QQxy.one, x * y)


# -- linalg2 ----------------------------------------------------------------------------


def test_linalg2_main_example():
    f, g = QQxy("y+x^2"), QQxy("y+x")
    w = linalg2_witness(f, g, QQxy, 0)
    assert w.N == 1 and w.h == QQxy("x^2-x")
    assert verify_linalg2(w, f, g, 0)
    assert w.follow_up.is_in and verify_certificate(w.follow_up, QQxy("x"), (f * g) ** w.N)


def test_linalg2_sign_convention():
    # the earliest dependency is f - g, so h = -x^2 (the negative of g - f)
    f, g = QQxy("y"), QQxy("y+x^2")
    w = linalg2_witness(f, g, QQxy, 0)
    assert w.N == 1 and w.h == QQxy("-x^2")
    assert verify_linalg2(w, f, g, 0)


def test_linalg2_trivial_and_failures():
    w = linalg2_witness(QQxy("x"), QQxy("y"), QQxy, 0)
    assert w.trivial and w.h == QQxy("x")
    with pytest.raises(Linalg2Fail):
        linalg2_witness(QQxy("x+1"), QQxy("y"), QQxy, 0)
    with pytest.raises(Linalg2Fail):
        linalg2_witness(QQxy("y"), QQxy("3"), QQxy, 0)
    R3 = parse_ring("QQ[x,y,z]")
    with pytest.raises(Linalg2Fail):
        linalg2_witness(R3("y"), R3("z"), R3, 0)


def test_linalg2_tampered_witness_fails_replay():
    f, g = QQxy("y+x^2"), QQxy("y+x")
    w = linalg2_witness(f, g, QQxy, 0)
    w.h = w.h + QQxy("1")
    assert not verify_linalg2(w, f, g, 0)


# -- L(p_f) and p(W) ----------------------------------------------------------------------


def test_L_of_x():
    L = L_of_pf_truncated(QQxy("x"), QQxy, cap=3, e_max=3)
    for k in range(4):
        assert L.contains(QQxy(f"x^{k}"))
    for m in ("y", "x*y", "y^2"):
        assert not L.contains(QQxy(m))


def test_L_on_the_cusp():
    L = L_of_pf_truncated(CUSP_QQ("x^2"), CUSP_QQ, cap=6, e_max=3)
    assert L.contains(CUSP_QQ("x^3"))


def test_L_contains_powers():
    f = QQxy("x*y+1")
    L = L_of_pf_truncated(f, QQxy, cap=4, e_max=2)
    assert L.contains(QQxy.one) and L.contains(f) and L.contains(f * f)


def test_p_of_W_examples():
    x, y = QQxy("x"), QQxy("y")
    assert p_of_W_member(x, [x]).status == "not_in_p"
    v = p_of_W_member(y, [x])
    assert v.status == "in_p_at_bound"
    assert all(ver.is_out for _, ver in v.tried)
    v = p_of_W_member(CUSP_QQ("x^3"), [CUSP_QQ("x^2")], CUSP_QQ)
    assert v.status == "not_in_p" and v.witness == CUSP_QQ("x^6")
    assert verify_certificate(v.verdict, CUSP_QQ("x^3"), CUSP_QQ("x^6"))


# -- the irreducibility ladder ----------------------------------------------------------------


def test_irred_report_xy_plus_x_plus_y():
    rep = irred_conditions_report(QQxy("x*y+x+y"))
    assert rep["5"].status == "holds"
    assert rep["4"].status == "fails" and rep["4"].witness["u"] == "1"
    assert chain_consistent(rep)


def test_irred_report_quartic():
    f = QQxy("x^3+y^2+x^4*y")
    rep = irred_conditions_report(f)
    assert rep["3"].status == "fails" and rep["3"].witness == QQxy("y")
    # sampled scalars cannot prove (4); the report stays Unknown and says why
    assert rep["4"].status == "unknown" and "sampled" in rep["4"].note
    assert rep["5"].status == "holds"
    assert chain_consistent(rep)


def test_irred_report_cusp():
    rep = irred_conditions_report(CUSP_QQ("x^2"), CUSP_QQ, e_max=3)
    assert rep["1**"].status == "fails"
    assert rep["1**"].witness["e"] == 3 and rep["1**"].witness["witness"] == CUSP_QQ("x^3")
    assert rep["2"].status != "holds"
    assert chain_consistent(rep)


def test_irred_report_over_gf():
    G = parse_ring("GF(3)[x,y]")
    rep = irred_conditions_report(G("x*y+1"), G, e_max=2)
    assert set(rep) == set(CHAIN)
    assert chain_consistent(rep)
    assert rep["4"].status in ("holds", "fails")
