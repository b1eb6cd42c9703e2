"""Exact computation in the reciprocal complement R(D) of a polynomial ring
or monomial subalgebra D: the subring of Frac D generated by all 1/d."""

from .expr import RatFunc
from .factor import FactoredPoly, divisors_in_ring, factor_exhaustive_gf
from .factroid import FSpace, colon_space, f1_step, factroid_closure
from .field import FieldSpec, parse_field
from .linalg import SpanBasis, find_linear_dependency, in_span, span_of
from .membership import MemberConfig, Verdict, member, oracle_member_gf, verify_certificate
from .poly import NEG_INF, Poly, Ring, leading_form, parse_poly, parse_ring, weighted_degree
from .primes import (
    L_of_pf_truncated,
    irred_conditions_report,
    linalg2_witness,
    monomial_prime_lattice,
    p_of_W_member,
    prime_contains,
    pseudoradical_member_2var,
)
from .recip import (
    UnitFractionSum,
    decompose,
    distinctify,
    greedy_egyptian_rational,
    invert_unit,
    is_egyptian,
    is_unit_graded,
    parse_unit_fraction_sum,
    split_identity,
    to_ratfunc,
    valuation_graded,
)

__all__ = [
    "FSpace", "FactoredPoly", "FieldSpec", "L_of_pf_truncated", "MemberConfig", "NEG_INF", "Poly", "RatFunc", "Ring",
    "SpanBasis", "UnitFractionSum", "Verdict", "colon_space", "decompose", "distinctify", "divisors_in_ring",
    "f1_step", "factor_exhaustive_gf", "factroid_closure", "find_linear_dependency", "greedy_egyptian_rational",
    "in_span", "invert_unit", "irred_conditions_report", "is_egyptian", "is_unit_graded", "leading_form",
    "linalg2_witness", "member", "monomial_prime_lattice", "oracle_member_gf", "p_of_W_member", "parse_field",
    "parse_poly", "parse_ring", "parse_unit_fraction_sum", "prime_contains", "pseudoradical_member_2var",
    "span_of", "split_identity", "to_ratfunc", "valuation_graded", "verify_certificate", "weighted_degree",
]
