"""Sparse multivariate polynomials over ``FieldSpec`` and the ambient ring D.

A :class:`Ring` is either a full polynomial ring ``K[x1, ..., xn]`` or a
monomial subalgebra ``K[m1, ..., mk]`` of it.  Polynomials always live in the
full ring; subalgebra membership is a separate check so that intermediate
values (quotients, cofactors) can leave D without ceremony.

Monomials are tuples of exponents.  The canonical order is graded
lexicographic, and printing lists terms from largest to smallest.
"""

from __future__ import annotations

import functools
import re
from math import gcd as _gcd
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping

from .field import CoefficientError, FieldSpec, parse_field

Monomial = tuple


class _NegInf:
    """Degree of the zero polynomial.  Absorbs addition, below every int."""

    _inst = None

    def __new__(cls):
        if cls._inst is None:
            cls._inst = super().__new__(cls)
        return cls._inst

    def __repr__(self):
        return "NEG_INF"

    def __add__(self, other):
        return self

    __radd__ = __add__

    def __lt__(self, other):
        return other is not self

    def __le__(self, other):
        return True

    def __gt__(self, other):
        return False

    def __ge__(self, other):
        return other is self

    def __eq__(self, other):
        return other is self

    def __hash__(self):
        return hash("NEG_INF")


NEG_INF = _NegInf()


class NotDivisible(ArithmeticError):
    """Raised by exact division when the divisor does not divide."""


class PolySyntaxError(ValueError):
    def __init__(self, msg, pos):
        super().__init__(f"{msg} at position {pos}")
        self.pos = pos


class NotInSubalgebra(ValueError):
    pass


def grlex_key(m: Monomial):
    return (sum(m), m)


@dataclass(frozen=True)
class Ring:
    """The ambient domain D: a field, variables, optional monomial generators
    and a grading weight vector."""

    field: FieldSpec
    vars: tuple
    gens: tuple = ()
    weights: tuple = field(default=())

    def __post_init__(self):
        n = len(self.vars)
        if n == 0:
            raise ValueError("a ring needs at least one variable")
        if len(set(self.vars)) != n:
            raise ValueError("duplicate variable names")
        for v in self.vars:
            if not re.fullmatch(r"[A-Za-z_][A-Za-z_0-9]*", v):
                raise ValueError(f"bad variable name {v!r}")
        if not self.weights:
            object.__setattr__(self, "weights", (1,) * n)
        w = self.weights
        if len(w) != n or any(k < 0 for k in w) or not any(w):
            raise ValueError("weights must be nonnegative, not all zero, one per variable")
        gens = tuple(tuple(g) for g in self.gens)
        for g in gens:
            if len(g) != n or any(e < 0 for e in g):
                raise ValueError(f"bad generator exponent {g}")
            if sum(a * b for a, b in zip(g, w)) <= 0:
                raise ValueError("monomial generators need positive weighted degree")
        object.__setattr__(self, "gens", tuple(sorted(set(gens), key=grlex_key)))

    # construction ---------------------------------------------------------

    @property
    def nvars(self) -> int:
        return len(self.vars)

    @property
    def is_subalgebra(self) -> bool:
        return bool(self.gens)

    @property
    def full(self) -> "Ring":
        """The polynomial ring on the same variables."""
        return Ring(self.field, self.vars, (), self.weights) if self.gens else self

    @property
    def zero(self) -> "Poly":
        return Poly(self, {})

    @property
    def one(self) -> "Poly":
        return self.const(1)

    def const(self, c) -> "Poly":
        return Poly(self, {(0,) * self.nvars: self.field(c)})

    def var(self, name_or_index) -> "Poly":
        i = name_or_index if isinstance(name_or_index, int) else self.vars.index(name_or_index)
        m = [0] * self.nvars
        m[i] = 1
        return Poly(self, {tuple(m): self.field.one})

    def monomial(self, exps, c=1) -> "Poly":
        return Poly(self, {tuple(exps): self.field(c)})

    def gens_as_polys(self):
        return [self.var(i) for i in range(self.nvars)]

    def __call__(self, text) -> "Poly":
        if isinstance(text, Poly):
            if text.ring.vars != self.vars or text.ring.field != self.field:
                raise ValueError("polynomial from an incompatible ring")
            return Poly(self, text.terms)
        if isinstance(text, str):
            return parse_poly(text, self)
        return self.const(text)

    # subalgebra membership ------------------------------------------------

    def monomial_in_D(self, m: Monomial) -> bool:
        if not self.gens:
            return True
        return _in_monoid(self.gens, tuple(m))

    def contains(self, f: "Poly") -> bool:
        return all(self.monomial_in_D(m) for m in f.terms)

    def __str__(self):
        s = f"{self.field}[{','.join(self.vars)}"
        if self.gens:
            s += ";gens=" + ",".join(_fmt_monomial(g, self.vars) or "1" for g in self.gens)
        if any(k != 1 for k in self.weights):
            s += ";weights=" + ",".join(map(str, self.weights))
        return s + "]"


@functools.lru_cache(maxsize=1 << 16)
def _in_monoid(gens, m) -> bool:
    if not any(m):
        return True
    for g in gens:
        if all(a >= b for a, b in zip(m, g)):
            if _in_monoid(gens, tuple(a - b for a, b in zip(m, g))):
                return True
    return False


def parse_ring(text: str) -> Ring:
    """Parse ``QQ[x,y]``, ``GF(2)[x]``, ``QQ[x;gens=x^2,x^3]``, ``...;weights=1,3``."""
    m = re.fullmatch(r"\s*([^\[]+)\[(.*)\]\s*", text)
    if not m:
        raise ValueError(f"bad ring spec {text!r}")
    fld = parse_field(m.group(1))
    parts = [p.strip() for p in m.group(2).split(";")]
    names = tuple(v.strip() for v in parts[0].split(",") if v.strip())
    gens_text, weights = None, ()
    for extra in parts[1:]:
        key, _, val = extra.partition("=")
        key = key.strip()
        if key == "gens":
            gens_text = val
        elif key == "weights":
            try:
                weights = tuple(int(v) for v in val.split(","))
            except ValueError:
                raise ValueError(f"bad weights {val!r}") from None
        else:
            raise ValueError(f"unknown ring option {key!r}")
    base = Ring(fld, names, (), weights)
    gens = ()
    if gens_text is not None:
        gl = []
        for g in gens_text.split(","):
            p = parse_poly(g, base)
            if len(p.terms) != 1:
                raise ValueError(f"generator {g!r} is not a monomial")
            gl.append(next(iter(p.terms)))
        gens = tuple(gl)
    return Ring(fld, names, gens, weights)


def _fmt_monomial(m, names) -> str:
    parts = []
    for v, e in zip(names, m):
        if e == 1:
            parts.append(v)
        elif e:
            parts.append(f"{v}^{e}")
    return "*".join(parts)


class Poly:
    """Immutable sparse polynomial.  ``terms`` maps exponent tuples to nonzero
    field scalars."""

    __slots__ = ("ring", "terms", "_hash", "_lm")

    def __init__(self, ring: Ring, terms: Mapping, _clean=False):
        self.ring = ring
        if _clean:
            self.terms = terms
        else:
            fld = ring.field
            t = {}
            for m, c in terms.items():
                c = fld(c)
                if c:
                    t[tuple(m)] = c
            self.terms = t
        self._hash = None
        self._lm = None

    # basic queries --------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def is_constant(self) -> bool:
        return all(not any(m) for m in self.terms)

    def constant_coeff(self):
        return self.terms.get((0,) * self.ring.nvars, self.ring.field.zero)

    def lm(self) -> Monomial:
        if not self.terms:
            raise ValueError("zero polynomial has no leading monomial")
        if self._lm is None:
            self._lm = max(self.terms, key=grlex_key)
        return self._lm

    def lc(self):
        return self.terms[self.lm()]

    def degree(self):
        """Total degree; NEG_INF for zero."""
        if not self.terms:
            return NEG_INF
        return max(sum(m) for m in self.terms)

    def deg_in(self, i: int):
        if not self.terms:
            return NEG_INF
        return max(m[i] for m in self.terms)

    def wdeg(self, w=None):
        return weighted_degree(self, w or self.ring.weights)

    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda mc: grlex_key(mc[0]), reverse=True)

    def monic(self) -> "Poly":
        if not self.terms:
            return self
        return self.scale(self.ring.field.inv(self.lc()))

    def is_monic(self) -> bool:
        return bool(self.terms) and self.lc() == 1

    def variables(self):
        return {i for m in self.terms for i, e in enumerate(m) if e}

    # arithmetic -----------------------------------------------------------

    def _coerce(self, other) -> "Poly":
        if isinstance(other, Poly):
            if other.ring is not self.ring and (
                other.ring.vars != self.ring.vars or other.ring.field != self.ring.field
            ):
                raise ValueError("polynomials from different rings")
            return other
        if isinstance(other, (int, Fraction)):
            return self.ring.const(other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        t = dict(self.terms)
        p = self.ring.field.p
        for m, c in other.terms.items():
            v = t.get(m, 0) + c
            if p:
                v %= p
            if v:
                t[m] = v
            else:
                t.pop(m, None)
        return Poly(self.ring, t, _clean=True)

    __radd__ = __add__

    def __neg__(self):
        p = self.ring.field.p
        return Poly(self.ring, {m: (-c) % p if p else -c for m, c in self.terms.items()}, _clean=True)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c) -> "Poly":
        fld = self.ring.field
        c = fld(c)
        if not c:
            return self.ring.zero
        p = fld.p
        return Poly(self.ring, {m: (v * c) % p if p else v * c for m, v in self.terms.items()}, _clean=True)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        p = self.ring.field.p
        if len(self.terms) * len(other.terms) > KRONECKER_MIN:
            t = _kronecker_mul(self.terms, other.terms, p)
            if t is not None:
                return Poly(self.ring, t, _clean=True)
        t: dict = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = tuple(a + b for a, b in zip(m1, m2))
                t[m] = t.get(m, 0) + c1 * c2
        if p:
            t = {m: c % p for m, c in t.items() if c % p}
        else:
            t = {m: c for m, c in t.items() if c}
        return Poly(self.ring, t, _clean=True)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative exponent")
        result, base = self.ring.one, self
        while k:
            if k & 1:
                result = result * base
            base = base * base if k > 1 else base
            k >>= 1
        return result

    def mul_monomial(self, m: Monomial, c=1) -> "Poly":
        fld = self.ring.field
        c = fld(c)
        p = fld.p
        return Poly(
            self.ring,
            {tuple(a + b for a, b in zip(k, m)): (v * c) % p if p else v * c for k, v in self.terms.items()},
            _clean=True,
        ) if c else self.ring.zero

    def divexact(self, b: "Poly") -> "Poly":
        """Quotient q with q*b == self, or raise NotDivisible."""
        q = self.try_divexact(b)
        if q is None:
            raise NotDivisible(f"{b} does not divide {self}")
        return q

    def try_divexact(self, b: "Poly"):
        b = self._coerce(b)
        if not b.terms:
            raise ZeroDivisionError("division by the zero polynomial")
        fld = self.ring.field
        p = fld.p
        blm = b.lm()
        binv = fld.inv(b.lc())
        bterms = list(b.terms.items())
        r = dict(self.terms)
        q = {}
        for i, e in enumerate(blm):
            if e and max((m[i] for m in r), default=0) < e:
                return None if r else Poly(self.ring, {}, _clean=True)
        while r:
            rlm = max(r, key=grlex_key)
            shift = tuple(a - b_ for a, b_ in zip(rlm, blm))
            if any(s < 0 for s in shift):
                return None
            c = r[rlm] * binv
            if p:
                c %= p
            q[shift] = c
            for m, v in bterms:
                mm = tuple(a + s for a, s in zip(m, shift))
                nv = r.get(mm, 0) - c * v
                if p:
                    nv %= p
                if nv:
                    r[mm] = nv
                else:
                    r.pop(mm, None)
        return Poly(self.ring, q, _clean=True)

    def divides(self, a: "Poly") -> bool:
        return a.try_divexact(self) is not None

    def __floordiv__(self, other):
        return self.divexact(self._coerce(other))

    # comparisons ----------------------------------------------------------

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = self.ring.const(other)
        if not isinstance(other, Poly):
            return NotImplemented
        return self.terms == other.terms and self.ring.vars == other.ring.vars

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self.terms.items()))
        return self._hash

    def sort_key(self):
        """Deterministic total order: by degree, then term list in grlex."""
        return (
            self.degree() if self.terms else -1,
            tuple((grlex_key(m), self.ring.field.fmt(c)) for m, c in self.sorted_terms()),
        )

    # substitution ---------------------------------------------------------

    def subs_zero(self, i: int) -> "Poly":
        return Poly(self.ring, {m: c for m, c in self.terms.items() if not m[i]}, _clean=True)

    def monomial_content(self) -> Monomial:
        """Largest monomial dividing every term."""
        if not self.terms:
            return (0,) * self.ring.nvars
        return tuple(min(col) for col in zip(*self.terms))

    def div_monomial(self, m: Monomial) -> "Poly":
        return Poly(self.ring, {tuple(a - b for a, b in zip(k, m)): c for k, c in self.terms.items()}, _clean=True)

    def with_ring(self, ring: Ring) -> "Poly":
        return Poly(ring, self.terms, _clean=True)

    # printing -------------------------------------------------------------

    def __str__(self):
        return format_poly(self)

    def __repr__(self):
        return f"Poly({format_poly(self)!r})"


KRONECKER_MIN = 64


def _pack(terms: dict, radix, bits: int, nslots: int) -> int:
    width = (bits + 7) // 8
    buf = bytearray(nslots * width)
    for m, c in terms.items():
        idx = 0
        for e, r in zip(reversed(m), reversed(radix)):
            idx = idx * r + e
        buf[idx * width:(idx + 1) * width] = c.to_bytes(width, "little")
    return int.from_bytes(buf, "little")


def _kronecker_mul(ta: dict, tb: dict, p: int):
    """Product of two term dicts via one big-integer multiplication.

    Monomials map to slots of a dense array (mixed radix per variable) and
    coefficients to fixed-width nonnegative fields, wide enough that no
    carry can cross a slot.  Over QQ the inputs are scaled to integers and
    split by sign.  Returns None when the dense layout would be too sparse."""
    n = len(next(iter(ta)))
    radix = [max(m[i] for m in ta) + max(m[i] for m in tb) + 1 for i in range(n)]
    nslots = 1
    for r in radix:
        nslots *= r
    if 2 * nslots > len(ta) * len(tb) or nslots > 1 << 22:
        return None
    if p:
        parts_a, parts_b, scale = [(1, ta)], [(1, tb)], 1
    else:
        da = _lcm_dens(ta.values())
        db = _lcm_dens(tb.values())
        parts_a = _sign_split({m: int(c * da) for m, c in ta.items()})
        parts_b = _sign_split({m: int(c * db) for m, c in tb.items()})
        scale = Fraction(1, da * db)
    ma = max(abs(c) for _, t in parts_a for c in t.values())
    mb = max(abs(c) for _, t in parts_b for c in t.values())
    bits = (min(len(ta), len(tb)) * ma * mb).bit_length() + 1
    width = (bits + 7) // 8
    acc: dict = {}
    for sa, xa in parts_a:
        A = _pack(xa, radix, bits, nslots)
        for sb, xb in parts_b:
            raw = (A * _pack(xb, radix, bits, nslots)).to_bytes(2 * nslots * width, "little")
            sign = sa * sb
            for idx in range(nslots):
                c = int.from_bytes(raw[idx * width:(idx + 1) * width], "little")
                if c:
                    acc[idx] = acc.get(idx, 0) + sign * c
    out = {}
    for idx, c in acc.items():
        c = c % p if p else c * scale
        if c:
            m = []
            for r in radix:
                idx, e = divmod(idx, r)
                m.append(e)
            out[tuple(m)] = c
    return out


def _lcm_dens(values) -> int:
    d = 1
    for c in values:
        q = Fraction(c).denominator
        d = d * q // _gcd(d, q)
    return d


def _sign_split(t: dict):
    pos = {m: c for m, c in t.items() if c > 0}
    neg = {m: -c for m, c in t.items() if c < 0}
    return [(s, x) for s, x in ((1, pos), (-1, neg)) if x]


def weighted_degree(f: Poly, w=None):
    """max over terms of the w-weighted degree; NEG_INF for f == 0."""
    w = w if w is not None else f.ring.weights
    if not f.terms:
        return NEG_INF
    return max(sum(a * b for a, b in zip(m, w)) for m in f.terms)


def leading_form(f: Poly, w=None) -> Poly:
    w = w if w is not None else f.ring.weights
    if not f.terms:
        raise ValueError("leading form of the zero polynomial")
    d = weighted_degree(f, w)
    return Poly(f.ring, {m: c for m, c in f.terms.items() if sum(a * b for a, b in zip(m, w)) == d}, _clean=True)


def divmod_univariate(a: Poly, b: Poly):
    """Euclidean division in K[x] (single variable rings only)."""
    if a.ring.nvars != 1:
        raise ValueError("univariate division needs a one-variable ring")
    if not b:
        raise ZeroDivisionError("division by zero polynomial")
    fld = a.ring.field
    p = fld.p
    db = b.lm()[0]
    binv = fld.inv(b.lc())
    r = dict(a.terms)
    q = {}
    while r:
        dr = max(m[0] for m in r)
        if dr < db:
            break
        c = r[(dr,)] * binv
        if p:
            c %= p
        q[(dr - db,)] = c
        for (e,), v in b.terms.items():
            k = (e + dr - db,)
            nv = r.get(k, 0) - c * v
            if p:
                nv %= p
            if nv:
                r[k] = nv
            else:
                r.pop(k, None)
    return Poly(a.ring, q, _clean=True), Poly(a.ring, r, _clean=True)


# -- printing ----------------------------------------------------------------


def format_poly(f: Poly) -> str:
    if not f.terms:
        return "0"
    fld = f.ring.field
    out = []
    for m, c in f.sorted_terms():
        neg = False
        if not fld.p and c < 0:
            neg, c = True, -c
        mono = _fmt_monomial(m, f.ring.vars)
        cs = fld.fmt(c)
        if not mono:
            body = cs
        elif cs == "1":
            body = mono
        else:
            body = f"{cs}*{mono}"
        if not out:
            out.append(("-" if neg else "") + body)
        else:
            out.append((" - " if neg else " + ") + body)
    return "".join(out)


# -- parsing -----------------------------------------------------------------

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z_0-9]*)|(\*\*|[-+*/^()]))")


def _tokenize(text):
    pos, toks = 0, []
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise PolySyntaxError(f"unexpected character {text[pos:pos + 1]!r}", pos)
        start = m.start(m.lastindex)
        if m.group(1):
            toks.append(("num", int(m.group(1)), start))
        elif m.group(2):
            toks.append(("name", m.group(2), start))
        else:
            op = "^" if m.group(3) == "**" else m.group(3)
            toks.append(("op", op, start))
        pos = m.end()
    toks.append(("end", None, len(text)))
    return toks


class _Parser:
    def __init__(self, text, ring: Ring):
        self.toks = _tokenize(text)
        self.i = 0
        self.ring = ring
        self.text = text

    def peek(self):
        return self.toks[self.i]

    def take(self):
        t = self.toks[self.i]
        self.i += 1
        return t

    def expect_op(self, op):
        t = self.take()
        if t[0] != "op" or t[1] != op:
            raise PolySyntaxError(f"expected {op!r}", t[2])

    def parse(self) -> Poly:
        if self.peek()[0] == "end":
            raise PolySyntaxError("empty polynomial", 0)
        f = self.expr()
        t = self.peek()
        if t[0] != "end":
            raise PolySyntaxError(f"unexpected {t[1]!r}", t[2])
        return f

    def expr(self):
        sign = 1
        t = self.peek()
        if t[0] == "op" and t[1] in "+-":
            self.take()
            sign = -1 if t[1] == "-" else 1
        f = self.term()
        if sign < 0:
            f = -f
        while True:
            t = self.peek()
            if t[0] == "op" and t[1] in "+-":
                self.take()
                g = self.term()
                f = f + g if t[1] == "+" else f - g
            else:
                return f

    def term(self):
        f = self.factor()
        while True:
            t = self.peek()
            if t[0] == "op" and t[1] == "*":
                self.take()
                f = f * self.factor()
            elif t[0] == "op" and t[1] == "/":
                self.take()
                g = self.factor()
                if not g and self.ring.field.p:
                    raise CoefficientError(f"division by a multiple of {self.ring.field.p}")
                if not g.is_constant() or not g:
                    raise PolySyntaxError("division only by a nonzero constant", t[2])
                f = f.scale(self.ring.field.inv(g.constant_coeff()))
            else:
                return f

    def factor(self):
        base = self.atom()
        t = self.peek()
        if t[0] == "op" and t[1] == "^":
            self.take()
            e = self.take()
            if e[0] != "num":
                raise PolySyntaxError("exponent must be a nonnegative integer", e[2])
            return base ** e[1]
        return base

    def atom(self):
        t = self.take()
        ring = self.ring.full
        if t[0] == "num":
            return ring.const(t[1])
        if t[0] == "name":
            if t[1] not in ring.vars:
                raise PolySyntaxError(f"unknown variable {t[1]!r}", t[2])
            return ring.var(t[1])
        if t[0] == "op" and t[1] == "(":
            f = self.expr()
            self.expect_op(")")
            return f
        if t[0] == "op" and t[1] == "-":
            return -self.factor()
        raise PolySyntaxError(f"unexpected {t[1]!r}" if t[0] != "end" else "unexpected end", t[2])


def parse_poly(text: str, ring: Ring) -> Poly:
    """Parse ``text`` into a canonical Poly of ``ring``.

    Raises PolySyntaxError (with a position), CoefficientError for scalars
    that do not exist in the field, and NotInSubalgebra for monomials outside
    a monomial subalgebra."""
    f = _Parser(text, ring).parse().with_ring(ring)
    if ring.gens:
        for m in f.terms:
            if not ring.monomial_in_D(m):
                raise NotInSubalgebra(f"monomial {_fmt_monomial(m, ring.vars)} is not in {ring}")
    return f


def poly_from_terms(ring: Ring, terms: Iterable) -> Poly:
    t: dict = {}
    for m, c in terms:
        t[tuple(m)] = t.get(tuple(m), 0) + c
    return Poly(ring, t)


def remainder(f: Poly, q: Poly) -> Poly:
    """Normal form of f modulo the principal ideal (q).

    A single polynomial is a Groebner basis of the ideal it generates, so
    this remainder is canonical and linear in f; its kernel is exactly qD."""
    if not q:
        raise ZeroDivisionError("remainder by zero")
    fld = f.ring.field
    p = fld.p
    qlm = q.lm()
    qinv = fld.inv(q.lc())
    qterms = list(q.terms.items())
    work = dict(f.terms)
    rem = {}
    while work:
        m = max(work, key=grlex_key)
        c = work.pop(m)
        shift = tuple(a - b for a, b in zip(m, qlm))
        if any(s < 0 for s in shift):
            rem[m] = c
            continue
        k = c * qinv
        if p:
            k %= p
        for mq, v in qterms:
            mm = tuple(a + s for a, s in zip(mq, shift))
            if mm == m:
                continue
            nv = work.get(mm, 0) - k * v
            if p:
                nv %= p
            if nv:
                work[mm] = nv
            else:
                work.pop(mm, None)
    return Poly(f.ring, rem, _clean=True)
