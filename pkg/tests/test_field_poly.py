from fractions import Fraction

import pytest
import sympy
from hypothesis import given
from hypothesis import strategies as st

from recipcomp.factor import (
    CapExceeded,
    FactoredPoly,
    divisors_in_ring,
    factor_exhaustive_gf,
    factor_known,
    irreducible_mod_p,
    trial_divisor,
)
from recipcomp.field import CoefficientError, FieldSpec, parse_field
from recipcomp.poly import (
    NEG_INF,
    NotDivisible,
    NotInSubalgebra,
    PolySyntaxError,
    leading_form,
    parse_poly,
    parse_ring,
    weighted_degree,
)

from conftest import CUSP_QQ, GF2x, GF3xy, GF5xy, QQx, QQxy, polys, sympy_poly, to_sympy

# -- fields ------------------------------------------------------------------


def test_field_parsing():
    assert parse_field("QQ") == FieldSpec.QQ
    assert parse_field("GF(7)").p == 7
    with pytest.raises(ValueError):
        parse_field("GF(9)")
    with pytest.raises(ValueError):
        parse_field("RR")


def test_gf_coercion_and_inverse():
    F = FieldSpec.gf(5)
    assert F(Fraction(1, 2)) == 3
    assert F.inv(2) == 3
    with pytest.raises(CoefficientError):
        FieldSpec.gf(2)(Fraction(1, 2))
    with pytest.raises(ZeroDivisionError):
        F.inv(0)


@given(st.integers(1, 96), st.sampled_from([2, 3, 5, 7, 97]))
def test_gf_inverse_matches_pow(a, p):
    F = FieldSpec.gf(p)
    if a % p:
        assert F.inv(a) * a % p == 1


# -- parsing -----------------------------------------------------------------


def test_parse_rational_coefficients():
    f = parse_poly("x^2*y - 1/2", QQxy)
    assert f.terms == {(2, 1): Fraction(1), (0, 0): Fraction(-1, 2)}


def test_parse_char2_cancellation():
    assert not parse_poly("x+x", GF2x)


def test_parse_outside_subalgebra():
    with pytest.raises(NotInSubalgebra):
        parse_poly("x", CUSP_QQ)
    assert parse_poly("x^5 + x^2", CUSP_QQ)


def test_parse_syntax_error_has_position():
    with pytest.raises(PolySyntaxError) as exc:
        parse_poly("x + * y", QQxy)
    assert exc.value.pos is not None


def test_parse_unknown_variable():
    with pytest.raises(PolySyntaxError):
        parse_poly("z", QQxy)


def test_coefficient_not_in_field():
    with pytest.raises(CoefficientError):
        parse_poly("x/2", parse_ring("GF(2)[x]"))


def test_ring_spec_variants():
    R = parse_ring("QQ[x,y;weights=1,3]")
    assert R.weights == (1, 3)
    C = parse_ring("GF(2)[x;gens=x^2,x^3]")
    assert C.gens == ((2,), (3,))
    assert not C.monomial_in_D((1,))
    assert C.monomial_in_D((5,))
    with pytest.raises(ValueError):
        parse_ring("QQ[x;gens=x+1]")


@given(polys(QQxy, 4, 5))
def test_print_parse_roundtrip_qq(f):
    assert parse_poly(str(f), QQxy) == f


@given(polys(GF5xy, 4, 5))
def test_print_parse_roundtrip_gf(f):
    assert parse_poly(str(f), GF5xy) == f


# -- degrees -----------------------------------------------------------------


def test_weighted_degree_examples():
    assert weighted_degree(QQxy("x^2*y"), (1, 3)) == 5
    assert weighted_degree(QQxy.zero, (1, 1)) is NEG_INF
    assert weighted_degree(QQxy("x^3+y^2+x^4*y"), (1, 1)) == 5


def test_leading_form_examples():
    assert leading_form(QQx("2*x+1"), (1,)) == QQx("2*x")
    assert leading_form(QQxy("x^3+y^2+x^4*y"), (1, 1)) == QQxy("x^4*y")
    assert leading_form(QQxy("x+y"), (1, 1)) == QQxy("x+y")
    with pytest.raises(ValueError):
        leading_form(QQxy.zero, (1, 1))


weights = st.tuples(st.integers(0, 3), st.integers(0, 3)).filter(any)


@given(polys(QQxy), polys(QQxy), weights)
def test_weighted_degree_is_a_degree(f, g, w):
    assert weighted_degree(f * g, w) == weighted_degree(f, w) + weighted_degree(g, w)
    if f + g:
        assert weighted_degree(f + g, w) <= max(weighted_degree(f, w), weighted_degree(g, w))


# -- arithmetic against sympy ------------------------------------------------------


@given(polys(QQxy), polys(QQxy))
def test_arithmetic_matches_sympy_qq(f, g):
    assert to_sympy(f * g) == sympy.expand(to_sympy(f) * to_sympy(g))
    assert to_sympy(f - g) == sympy.expand(to_sympy(f) - to_sympy(g))


@given(polys(GF5xy), polys(GF5xy))
def test_arithmetic_matches_sympy_gf(f, g):
    assert sympy_poly(f * g) == sympy_poly(f) * sympy_poly(g)
    assert sympy_poly(f + g) == sympy_poly(f) + sympy_poly(g)


@given(polys(GF5xy), polys(GF5xy, nonzero=True))
def test_divexact_recovers_factor(f, g):
    assert (f * g).divexact(g) == f


def test_divexact_examples():
    assert QQx("x^2+x").divexact(QQx("x")) == QQx("x+1")
    with pytest.raises(NotDivisible):
        QQx("x+1").divexact(QQx("x"))
    assert QQxy("x+1") * QQxy("y+1") == QQxy("x*y+x+y+1")


# -- factorization ---------------------------------------------------------------


def test_factor_examples():
    fp = factor_exhaustive_gf(GF2x("x^2+x"))
    assert fp.unit == 1 and [f for f, _ in fp.factors] == [GF2x("x"), GF2x("x+1")]
    fp = factor_exhaustive_gf(GF3xy("x*y+x+y+1"))
    assert sorted(str(f) for f, _ in fp.factors) == ["x + 1", "y + 1"]
    assert factor_exhaustive_gf(GF2x("x^2+x+1")).is_irreducible()


def test_factor_cap():
    with pytest.raises(CapExceeded):
        factor_exhaustive_gf(GF2x("x^9+x+1"))


@given(st.sampled_from([parse_ring("GF(3)[x]"), parse_ring("GF(5)[x]")]).flatmap(
    lambda R: polys(R, 6, 5, nonconstant=True)))
def test_factorization_against_sympy(f):
    fp = factor_exhaustive_gf(f)
    assert fp.expand() == f
    ours = sorted((str(sympy_poly(h).monic().as_expr()), m) for h, m in fp.factors)
    _, theirs = sympy_poly(f).factor_list()
    theirs = sorted((str(h.monic().as_expr()), m) for h, m in theirs)
    assert ours == theirs


@given(polys(GF3xy, 4, 4, nonconstant=True))
def test_listed_factors_have_no_smaller_divisor(f):
    for h, _ in factor_exhaustive_gf(f).factors:
        assert trial_divisor(h) is None


def test_divisors_in_ring_examples():
    C = parse_ring("GF(2)[x;gens=x^2,x^3]")
    x6 = C.full("x^6")
    ds = divisors_in_ring(factor_exhaustive_gf(x6, C.full), C)
    assert [str(d) for d in ds] == ["1", "x^2", "x^3", "x^4", "x^6"]
    ds = divisors_in_ring(factor_exhaustive_gf(parse_ring("GF(5)[x]")("x^2")))
    assert len(ds) == 3
    fp = FactoredPoly.from_factors(QQxy, [QQxy("x+1"), QQxy("y+1")], complete=True)
    assert sorted(str(d) for d in divisors_in_ring(fp)) == ["1", "x + 1", "x*y + x + y + 1", "y + 1"]


@given(polys(GF3xy, 4, 4, nonzero=True))
def test_divisors_closed_under_cofactor(f):
    fp = factor_exhaustive_gf(f)
    ds = set(divisors_in_ring(fp))
    monic = f.monic()
    for d in ds:
        assert monic.divexact(d) in ds


def test_factor_known_over_qq_uses_shifts():
    fp = factor_known(QQxy("x*y+x+y+1"))
    assert fp.complete and sorted(str(f) for f, _ in fp.factors) == ["x + 1", "y + 1"]


def test_irreducible_mod_p_certificate():
    assert irreducible_mod_p(QQxy("x^3+y^2+x^4*y")) is not None
    assert irreducible_mod_p(QQxy("x^2-y^2")) is None
