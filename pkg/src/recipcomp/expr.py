"""Rational functions and certificate expression trees.

``RatFunc`` is the plain num/den pair; nothing is ever reduced to lowest
terms (that would need multivariate gcds) and equality is by
cross-multiplication.

``Frac`` keeps the denominator as a product of monic "atoms" with
exponents.  Sums take the atom-wise maximum as common denominator, which
keeps long unit-fraction sums at a sane size where Π d_i would explode.

Certificate expressions are trees over ``Recip(d)`` (meaning 1/d) and
``Scalar(c)`` leaves with ``Add`` and ``Mul`` nodes.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .poly import Poly, Ring, parse_poly


class RatFunc:
    __slots__ = ("num", "den")

    def __init__(self, num: Poly, den: Poly | None = None):
        if den is None:
            den = num.ring.one
        if not den:
            raise ZeroDivisionError("zero denominator")
        self.num = num
        self.den = den

    @property
    def ring(self) -> Ring:
        return self.num.ring

    def __add__(self, other):
        other = _as_rf(other, self.ring)
        return RatFunc(self.num * other.den + other.num * self.den, self.den * other.den)

    __radd__ = __add__

    def __neg__(self):
        return RatFunc(-self.num, self.den)

    def __sub__(self, other):
        return self + (-_as_rf(other, self.ring))

    def __mul__(self, other):
        other = _as_rf(other, self.ring)
        return RatFunc(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def inverse(self):
        if not self.num:
            raise ZeroDivisionError("inverse of zero")
        return RatFunc(self.den, self.num)

    def __truediv__(self, other):
        return self * _as_rf(other, self.ring).inverse()

    def __eq__(self, other):
        if isinstance(other, (int, Fraction, Poly)):
            other = _as_rf(other, self.ring)
        if not isinstance(other, RatFunc):
            return NotImplemented
        return ratfunc_equal(self, other)

    __hash__ = None

    def is_zero(self):
        return not self.num

    def to_json(self):
        return {"num": str(self.num), "den": str(self.den)}

    @classmethod
    def from_json(cls, obj, ring):
        return cls(parse_poly(obj["num"], ring.full), parse_poly(obj["den"], ring.full))

    def __repr__(self):
        return f"RatFunc(({self.num}) / ({self.den}))"


def _as_rf(x, ring):
    if isinstance(x, RatFunc):
        return x
    if isinstance(x, Frac):
        return x.to_ratfunc()
    if isinstance(x, Poly):
        return RatFunc(x)
    return RatFunc(ring.const(x))


def ratfunc_equal(a: RatFunc, b: RatFunc) -> bool:
    return a.num * b.den == b.num * a.den


class Frac:
    """num / prod(atom ** e).  Atoms are monic, nonconstant polynomials."""

    __slots__ = ("num", "atoms")

    def __init__(self, num: Poly, atoms=None):
        self.num = num
        self.atoms = dict(atoms or {})

    @property
    def ring(self):
        return self.num.ring

    @classmethod
    def const(cls, ring: Ring, c) -> "Frac":
        return cls(ring.const(c))

    @classmethod
    def poly(cls, f: Poly) -> "Frac":
        return cls(f)

    @classmethod
    def recip(cls, d: Poly) -> "Frac":
        """1/d, splitting d into its leading coefficient and monic part."""
        if not d:
            raise ZeroDivisionError("reciprocal of zero")
        fld = d.ring.field
        if d.is_constant():
            return cls(d.ring.const(fld.inv(d.constant_coeff())))
        return cls(d.ring.const(fld.inv(d.lc())), {d.monic(): 1})

    @classmethod
    def recip_factored(cls, scalar, atoms: dict, ring: Ring) -> "Frac":
        """1/(scalar * prod atoms) with atoms already monic."""
        return cls(ring.const(ring.field.inv(scalar)), atoms)

    def den(self) -> Poly:
        out = self.ring.one
        for a, e in sorted(self.atoms.items(), key=lambda ae: ae[0].sort_key()):
            out = out * _power(a, e)
        return out

    def to_ratfunc(self) -> RatFunc:
        return RatFunc(self.num, self.den())

    def __mul__(self, other):
        if not isinstance(other, Frac):
            return Frac(self.num * other, self.atoms)
        at = dict(self.atoms)
        for a, e in other.atoms.items():
            at[a] = at.get(a, 0) + e
        return Frac(self.num * other.num, at)

    __rmul__ = __mul__

    def __neg__(self):
        return Frac(-self.num, self.atoms)

    def __add__(self, other):
        if not isinstance(other, Frac):
            other = Frac(self.ring.const(other) if not isinstance(other, Poly) else other)
        if not other.num:
            return self
        if not self.num:
            return other
        keys = set(self.atoms) | set(other.atoms)
        lcm = {a: max(self.atoms.get(a, 0), other.atoms.get(a, 0)) for a in keys}
        n = self.num * _cofactor(lcm, self.atoms, self.ring) + other.num * _cofactor(lcm, other.atoms, self.ring)
        return Frac(n, lcm)

    __radd__ = __add__

    def __sub__(self, other):
        return self + (-other)

    def is_zero(self):
        return not self.num

    def equals(self, rf: RatFunc) -> bool:
        return ratfunc_equal(self.to_ratfunc(), rf)

    def __repr__(self):
        return f"Frac({self.num} / {self.den()})"


_pow_cache: dict = {}


def _power(a: Poly, e: int) -> Poly:
    if e == 1:
        return a
    key = (a, e)
    hit = _pow_cache.get(key)
    if hit is None or hit.ring.vars != a.ring.vars or hit.ring.field != a.ring.field:
        hit = a ** e
        if len(_pow_cache) > 4096:
            _pow_cache.clear()
        _pow_cache[key] = hit
    return hit


def _cofactor(lcm: dict, atoms: dict, ring: Ring) -> Poly:
    out = ring.one
    for a in sorted(lcm, key=Poly.sort_key):
        e = lcm[a] - atoms.get(a, 0)
        if e:
            out = out * _power(a, e)
    return out


def frac_sum(fracs, ring: Ring) -> Frac:
    """Pairwise (balanced) summation; neighbours share atoms more often, so
    the intermediate common denominators stay small."""
    items = list(fracs)
    if not items:
        return Frac(ring.zero)
    while len(items) > 1:
        nxt = [items[i] + items[i + 1] for i in range(0, len(items) - 1, 2)]
        if len(items) % 2:
            nxt.append(items[-1])
        items = nxt
    return items[0]


# -- certificate expressions -------------------------------------------------


class Expr:
    def value(self) -> Frac:
        raise NotImplementedError

    def to_json(self):
        raise NotImplementedError

    def leaves(self):
        raise NotImplementedError

    def size(self) -> int:
        return sum(1 for _ in self.leaves())


@dataclass(frozen=True)
class Recip(Expr):
    d: Poly

    def value(self):
        return Frac.recip(self.d)

    def to_json(self):
        return {"recip": str(self.d)}

    def leaves(self):
        yield self

    def __str__(self):
        return f"1/({self.d})"


@dataclass(frozen=True)
class Scalar(Expr):
    c: object
    ring: Ring

    def value(self):
        return Frac.const(self.ring, self.c)

    def to_json(self):
        return {"scalar": self.ring.field.fmt(self.c)}

    def leaves(self):
        yield self

    def __str__(self):
        return self.ring.field.fmt(self.c)


@dataclass(frozen=True)
class Add(Expr):
    terms: tuple

    def value(self):
        return frac_sum([t.value() for t in self.terms], self.terms[0].ring if self.terms else None)

    @property
    def ring(self):
        return _ring_of(self)

    def to_json(self):
        return {"add": [t.to_json() for t in self.terms]}

    def leaves(self):
        for t in self.terms:
            yield from t.leaves()

    def __str__(self):
        return "(" + " + ".join(map(str, self.terms)) + ")"


@dataclass(frozen=True)
class Mul(Expr):
    factors: tuple

    def value(self):
        out = None
        for f in self.factors:
            v = f.value()
            out = v if out is None else out * v
        return out

    @property
    def ring(self):
        return _ring_of(self)

    def to_json(self):
        return {"mul": [f.to_json() for f in self.factors]}

    def leaves(self):
        for f in self.factors:
            yield from f.leaves()

    def __str__(self):
        return "*".join(map(str, self.factors))


def _ring_of(e: Expr) -> Ring:
    for leaf in e.leaves():
        return leaf.d.ring if isinstance(leaf, Recip) else leaf.ring
    raise ValueError("empty expression")


Recip.ring = property(lambda self: self.d.ring)


def add(*terms) -> Expr:
    flat = []
    for t in terms:
        flat.extend(t.terms if isinstance(t, Add) else (t,))
    if len(flat) == 1:
        return flat[0]
    return Add(tuple(flat))


def mul(*factors) -> Expr:
    flat = []
    for f in factors:
        if isinstance(f, Scalar) and f.c == f.ring.field.one and len(factors) > 1:
            continue
        flat.extend(f.factors if isinstance(f, Mul) else (f,))
    if not flat:
        return factors[0]
    if len(flat) == 1:
        return flat[0]
    return Mul(tuple(flat))


def scalar(ring: Ring, c) -> Scalar:
    return Scalar(ring.field(c), ring)


def expr_from_json(obj, ring: Ring) -> Expr:
    if not isinstance(obj, dict) or len(obj) != 1:
        raise ValueError(f"bad certificate node {obj!r}")
    (tag, val), = obj.items()
    if tag == "recip":
        return Recip(parse_poly(val, ring.full))
    if tag == "scalar":
        return scalar(ring, val)
    if tag == "add":
        return Add(tuple(expr_from_json(v, ring) for v in val))
    if tag == "mul":
        return Mul(tuple(expr_from_json(v, ring) for v in val))
    raise ValueError(f"unknown certificate tag {tag!r}")


def flatten(e: Expr, ring: Ring):
    """Expand into a list of (coefficient, monic atoms dict, expanded
    product of the atoms) unit terms.

    The value of ``e`` is sum c / prod(atoms).  Terms with equal expanded
    denominators are merged and zero coefficients dropped."""
    fld = ring.field
    by_atoms: dict = {}
    for c, atoms in _flat(e, ring):
        key = frozenset(atoms.items())
        if key in by_atoms:
            by_atoms[key][0] = fld.normalize(by_atoms[key][0] + c)
        else:
            by_atoms[key] = [c, atoms]
    merged: dict = {}
    memo: dict = {}
    for c, atoms in by_atoms.values():
        key = atoms_product(atoms, ring, memo)
        if key in merged:
            merged[key][0] = fld.normalize(merged[key][0] + c)
        else:
            merged[key] = [c, atoms]
    return [(c, atoms, den) for den, (c, atoms) in merged.items() if c]


def atoms_product(atoms: dict, ring: Ring, memo: dict) -> Poly:
    """prod(a ** e), sharing sorted prefixes through ``memo``."""
    seq = tuple(sorted(atoms.items(), key=lambda ae: ae[0].sort_key()))
    k = len(seq)
    while k and seq[:k] not in memo:
        k -= 1
    out = memo[seq[:k]] if k else ring.one
    for j in range(k, len(seq)):
        a, e = seq[j]
        out = out * _power(a, e)
        memo[seq[: j + 1]] = out
    return out


def _flat(e: Expr, ring: Ring):
    fld = ring.field
    if isinstance(e, Scalar):
        return [(e.c, {})] if e.c else []
    if isinstance(e, Recip):
        d = e.d
        if d.is_constant():
            return [(fld.inv(d.constant_coeff()), {})]
        return [(fld.inv(d.lc()), {d.monic(): 1})]
    if isinstance(e, Add):
        out = []
        for t in e.terms:
            out.extend(_flat(t, ring))
        return out
    if isinstance(e, Mul):
        acc = [(fld.one, {})]
        for f in e.factors:
            part = _flat(f, ring)
            nxt = []
            for c1, a1 in acc:
                for c2, a2 in part:
                    at = dict(a1)
                    for k, v in a2.items():
                        at[k] = at.get(k, 0) + v
                    nxt.append((fld.normalize(c1 * c2), at))
            acc = nxt
        return acc
    raise TypeError(f"not an expression: {e!r}")
