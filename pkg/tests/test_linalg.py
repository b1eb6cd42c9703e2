import sympy
from hypothesis import given
from hypothesis import strategies as st

from recipcomp.factor import monomials_upto
from recipcomp.linalg import combine, find_linear_dependency, in_span, span_of
from recipcomp.poly import parse_ring

from conftest import GF2x, GF5xy, QQx, QQxy, polys


def _rank_oracle(fs):
    """Rank via sympy: over QQ directly, over GF(p) by reducing a matrix mod p."""
    ring = fs[0].ring
    monos = sorted({m for f in fs for m in f.terms})
    if not monos:
        return 0
    rows = [[f.terms.get(m, 0) for m in monos] for f in fs]
    M = sympy.Matrix(rows)
    if ring.field.p:
        from sympy.polys.matrices import DomainMatrix
        from sympy import GF

        dm = DomainMatrix.from_Matrix(M).convert_to(GF(ring.field.p))
        return dm.rank()
    return M.rank()


def test_span_examples():
    B = span_of([QQx("x"), QQx("x+1"), QQx("1")])
    assert B.dim == 2
    assert sorted(str(p) for p in B.basis_polys()) == ["1", "x"]
    assert span_of([], QQx).dim == 0
    assert span_of([GF2x("x^2+x"), GF2x("x")]).dim == 2


def test_in_span_examples():
    B = span_of([QQx("1")])
    assert in_span(QQx("x"), B) is None
    assert not any(in_span(QQx.zero, B))


def test_dependency_examples():
    u = find_linear_dependency([QQxy("y"), QQxy("y")])
    assert u is not None and combine(u, [QQxy("y"), QQxy("y")]) == QQxy.zero
    assert u[-1] == 1
    assert find_linear_dependency([QQx("1"), QQx("x")]) is None


def test_forced_dependency_in_tK_t():
    # n+1 polynomials without constant term in degree <= n must be dependent
    R = parse_ring("QQ[t]")
    n = 4
    fs = [R(f"t^{k} + {k}*t") for k in range(1, n + 1)] + [R("t^2 - t^4")]
    u = find_linear_dependency(fs)
    assert u is not None and combine(u, fs) == R.zero


@given(st.lists(polys(QQxy, 2, 3), min_size=1, max_size=6))
def test_span_dimension_matches_sympy_rank(fs):
    assert span_of(fs, QQxy).dim == _rank_oracle(fs)


@given(st.lists(polys(GF5xy, 2, 3), min_size=1, max_size=6))
def test_span_dimension_matches_rank_mod_p(fs):
    assert span_of(fs, GF5xy).dim == _rank_oracle(fs)


@given(st.lists(polys(GF5xy, 2, 3), min_size=1, max_size=5), polys(GF5xy, 2, 3))
def test_in_span_coefficients_replay(fs, f):
    B = span_of(fs, GF5xy)
    coeffs = in_span(f, B)
    if coeffs is None:
        assert _rank_oracle(fs + [f]) == B.dim + 1
    else:
        assert combine(coeffs, list(B.generators), GF5xy) == f


@given(st.lists(polys(QQxy, 2, 3), min_size=1, max_size=8))
def test_dependency_is_exact(fs):
    u = find_linear_dependency(fs)
    if u is None:
        assert _rank_oracle(fs) == len(fs)
    else:
        assert any(u) and combine(u, fs, QQxy) == QQxy.zero


@given(st.lists(polys(GF5xy, 2, 4), min_size=7, max_size=9))
def test_too_many_polys_are_dependent(fs):
    # the degree <= 2 truncation of K[x,y] has dimension 6
    assert len(monomials_upto(2, 2)) == 6
    assert find_linear_dependency(fs) is not None
