"""Factroid spaces: F_1 steps, closures [S]_D and colon spaces.

Every space built from a single root B carries provenance: for each
generator g of the span we keep an expression tree equal to g/B in R(D).
B itself is ``1``; a divisor d of an element v = d*e is ``(1/e) * (v/B)``;
linear combinations combine linearly.  Membership of a in the closure of B
therefore comes with a replayable certificate for a/B.

Over GF(p) the F_1 step is exact: every element of the span is enumerated
(up to scalars) and factored.  Over QQ there is no general factorization, so
the step is an inner approximation: for each candidate factor q from a pool
(variables, small shifts, hints, cofactors found so far) the subspace
V ∩ qD is computed exactly as the kernel of the remainder map modulo q.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .budget import Budget
from .expr import Expr, Recip, add, mul, scalar
from .factor import CapExceeded, DEGREE_CAP, divisors_in_ring, factor_exhaustive_gf, monomials_upto
from .linalg import SpanBasis
from .poly import Poly, Ring, remainder

ENUM_CAP = 1 << 20
SHIFTS = (1, -1, 2, -2, 3, -3)


class EnumerationCapExceeded(CapExceeded):
    pass


@dataclass
class FSpace:
    """A K-subspace of D inside the degree-capped ambient space.

    ``closed``: a fixpoint of the F_1 step was reached.  ``exact``: every step
    was the true F_1 (always the case over GF(p) unless a cap forced the
    pool fallback).  ``exprs[i]`` is generators[i]/root when a root is set."""

    basis: SpanBasis
    degree_cap: int
    closed: bool = False
    exact: bool = True
    root: Poly | None = None
    exprs: tuple | None = None
    pool: tuple = ()
    steps: int = 0
    notes: list = field(default_factory=list)

    @property
    def ring(self) -> Ring:
        return self.basis.ring

    @property
    def dim(self) -> int:
        return self.basis.dim

    def contains(self, f: Poly) -> bool:
        return self.basis.contains(f)

    __contains__ = contains

    def polys(self):
        return self.basis.basis_polys()

    def express(self, f: Poly) -> Expr | None:
        """Certificate expression for f/root, or None if f is not in the span."""
        if self.exprs is None:
            raise ValueError("space has no provenance root")
        coeffs = self.basis.coefficients(f)
        if coeffs is None:
            return None
        return _lincomb(coeffs, self.exprs, self.ring)

    def __repr__(self):
        flags = ("closed " if self.closed else "") + ("exact" if self.exact else "inner")
        return f"FSpace(dim={self.dim}, cap={self.degree_cap}, {flags})"


def _lincomb(coeffs, exprs, ring) -> Expr:
    one = ring.field.one
    terms = []
    for c, e in zip(coeffs, exprs):
        if not c:
            continue
        terms.append(e if c == one else mul(scalar(ring, c), e))
    if not terms:
        return scalar(ring, 0)
    return add(*terms)


def ambient_dim(ring: Ring, cap: int) -> int:
    return sum(1 for m in monomials_upto(ring.nvars, cap) if ring.monomial_in_D(m))


def initial_space(S, ring: Ring, degree_cap=None) -> FSpace:
    S = [Poly(ring, f.terms, _clean=True) for f in S if f]
    cap = degree_cap if degree_cap is not None else max((f.degree() for f in S), default=0)
    for f in S:
        if not ring.contains(f):
            raise ValueError(f"{f} is not in {ring}")
        if f.degree() > cap:
            raise ValueError(f"{f} exceeds the degree cap {cap}")
    basis = SpanBasis(ring).extend(S)
    if len(S) == 1:
        return FSpace(basis, cap, root=S[0], exprs=(scalar(ring, 1),))
    return FSpace(basis, cap)


def f1_step(S, ring: Ring | None = None, degree_cap=None, *, exact=None, enum_cap=ENUM_CAP,
            hints=(), budget=None) -> FSpace:
    """One step S -> F_1(S): the span of all D-divisors of elements of S.

    ``exact=None`` means exact over GF(p) and pool-based over QQ.  An exact
    step whose enumeration would exceed ``enum_cap`` raises
    EnumerationCapExceeded."""
    if not isinstance(S, FSpace):
        S = list(S)
        ring = ring or S[0].ring
        S = initial_space(S, ring, degree_cap)
    ring = S.ring
    budget = Budget.of(budget) if budget is not None else None
    if exact is None:
        exact = bool(ring.field.p)
    if exact:
        if not ring.field.p:
            raise ValueError("exact F_1 steps need a prime field")
        return _f1_exact(S, enum_cap, budget)
    return _f1_pool(S, hints, budget)


def _new_space(S: FSpace, basis, exprs, exact, pool=None) -> FSpace:
    return FSpace(
        basis,
        S.degree_cap,
        closed=basis.dim == S.dim,
        exact=S.exact and exact,
        root=S.root,
        exprs=exprs,
        pool=S.pool if pool is None else pool,
        steps=S.steps + 1,
        notes=list(S.notes),
    )


def _element_expr(S: FSpace, gen_coeffs) -> Expr | None:
    if S.exprs is None:
        return None
    return _lincomb(gen_coeffs, S.exprs, S.ring)


def _f1_exact(S: FSpace, enum_cap, budget) -> FSpace:
    ring = S.ring
    p = ring.field.p
    dim = S.dim
    if p ** dim > enum_cap:
        raise EnumerationCapExceeded(f"{p}^{dim} span elements exceed the cap {enum_cap}")
    full = ambient_dim(ring, S.degree_cap)
    rows = S.basis.basis_polys()
    combos = S.basis.combos
    ngen = len(S.basis.generators)
    basis = S.basis
    exprs = list(S.exprs) if S.exprs is not None else None
    if basis.dim < full:
        # each projective point once: first nonzero coordinate is 1
        for lead in range(dim):
            for tail in itertools.product(range(p), repeat=dim - lead - 1):
                if basis.dim >= full:
                    break
                if budget:
                    budget.spend()
                coeffs = (0,) * lead + (1,) + tail
                v = ring.zero
                for c, r in zip(coeffs, rows):
                    if c:
                        v = v + r.scale(c)
                try:
                    fp = _factor_cached(v, ring)
                except CapExceeded as exc:
                    raise EnumerationCapExceeded(str(exc)) from exc
                vm = v.monic()
                for d in divisors_in_ring(fp, ring):
                    if basis.contains(d):
                        continue
                    basis = basis.extend([d])
                    if exprs is not None:
                        gc = [0] * ngen
                        for c, combo in zip(coeffs, combos):
                            for j, w in combo.items():
                                gc[j] = (gc[j] + c * w) % p
                        ev = _lincomb(gc, S.exprs, ring)
                        # v = lc(v) * vm and vm = d * e
                        e = vm.divexact(d).scale(v.lc())
                        exprs.append(mul(Recip(e), ev))
            if basis.dim >= full:
                break
    return _new_space(S, basis, tuple(exprs) if exprs is not None else None, True)


_factor_memo: dict = {}


def _factor_cached(v: Poly, ring: Ring):
    key = (ring, frozenset(v.monic().terms.items()))
    hit = _factor_memo.get(key)
    if hit is None:
        hit = factor_exhaustive_gf(v.monic(), ring, degree_cap=max(DEGREE_CAP, v.degree()))
        if len(_factor_memo) > 200000:
            _factor_memo.clear()
        _factor_memo[key] = hit
    return hit


def default_pool(ring: Ring, cap: int, hints=()) -> list:
    """Candidate factors for the pool-based step, in a fixed order."""
    out = []
    seen = set()

    def push(q):
        if q.is_constant() or q.degree() > cap or not ring.contains(q):
            return
        q = q.monic()
        if q not in seen:
            seen.add(q)
            out.append(q)

    for h in hints:
        push(Poly(ring, h.terms, _clean=True))
    if ring.gens:
        for m in monomials_upto(ring.nvars, cap):
            if any(m) and ring.monomial_in_D(m):
                push(ring.monomial(m))
    else:
        for i in range(ring.nvars):
            push(ring.var(i))
        shifts = range(1, ring.field.p) if ring.field.p else SHIFTS
        for i in range(ring.nvars):
            for s in shifts:
                push(ring.var(i) + s)
    return out


def _f1_pool(S: FSpace, hints, budget) -> FSpace:
    ring = S.ring
    fld = ring.field
    pool = list(S.pool) if S.pool else default_pool(ring, S.degree_cap, hints)
    seen = set(pool)
    rows = S.basis.basis_polys()
    combos = S.basis.combos
    ngen = len(S.basis.generators)
    basis = S.basis
    exprs = list(S.exprs) if S.exprs is not None else None

    def row_expr(tvec):
        if S.exprs is None:
            return None
        gc = [fld.zero] * ngen
        for t, combo in zip(tvec, combos):
            if t:
                for j, w in combo.items():
                    gc[j] = fld.normalize(gc[j] + t * w)
        return _lincomb(gc, S.exprs, ring)

    def push(d, ex):
        nonlocal basis
        if basis.contains(d):
            return
        basis = basis.extend([d])
        if exprs is not None:
            exprs.append(ex)

    # 1 divides everything
    if rows:
        ev = row_expr([fld.one] + [fld.zero] * (len(rows) - 1))
        push(ring.one, mul(Recip(rows[0]), ev) if ev is not None else None)

    # each basis element's monomial content, and its cofactor
    for k, r in enumerate(rows):
        cm = r.monomial_content()
        if any(cm) and ring.monomial_in_D(cm):
            co = r.div_monomial(cm)
            if ring.contains(co):
                tv = [fld.zero] * len(rows)
                tv[k] = fld.one
                ev = row_expr(tv)
                mono = ring.monomial(cm)
                push(mono, mul(Recip(co), ev) if ev is not None else None)
                push(co, mul(Recip(mono), ev) if ev is not None else None)
                for q in (mono, co.monic()):
                    if not q.is_constant() and q not in seen:
                        seen.add(q)
                        pool.append(q)

    found = []
    for q in list(pool):
        if budget:
            budget.spend()
        if q.degree() > S.degree_cap:
            continue
        kern = _kernel_mod(rows, q)
        for tvec in kern:
            w = ring.zero
            for t, r in zip(tvec, rows):
                if t:
                    w = w + r.scale(t)
            h = w.try_divexact(q)
            if h is None:
                continue
            if not ring.contains(h):
                continue
            ev = row_expr(tvec)
            push(q, mul(Recip(h), ev) if ev is not None else None)
            push(h, mul(Recip(q), ev) if ev is not None else None)
            found.append(h)
    for h in found:
        if not h.is_constant():
            hm = h.monic()
            if hm not in seen:
                seen.add(hm)
                pool.append(hm)
    return _new_space(S, basis, tuple(exprs) if exprs is not None else None, False, tuple(pool))


def _kernel_mod(rows, q):
    """Basis of {t : sum t_i rows_i ≡ 0 mod q}."""
    rems = [remainder(r, q) for r in rows]
    return kernel_vectors(rems)


def kernel_vectors(polys):
    """Basis of the space of coefficient vectors t with sum t_i polys_i == 0."""
    if not polys:
        return []
    ring = polys[0].ring
    fld = ring.field
    basis = SpanBasis(ring)
    out = []
    for k, f in enumerate(polys):
        coeffs = basis.coefficients(f)
        if coeffs is not None:
            v = [fld.normalize(-c) for c in coeffs] + [fld.one] + [fld.zero] * (len(polys) - k - 1)
            out.append(v)
        basis = basis.extend([f])
    return out


def factroid_closure(S, ring: Ring | None = None, degree_cap=None, *, exact=None, enum_cap=ENUM_CAP,
                     hints=(), budget=None, max_steps=64, target=None) -> FSpace:
    """Iterate F_1 to a fixpoint.  With ``target`` set, stop early as soon as
    the target lies in the space (the flag ``closed`` then stays False).

    ``exact=None``: exact steps over GF(p) while the enumeration fits under
    ``enum_cap``, then pool steps (and the space is marked inexact)."""
    if not isinstance(S, FSpace):
        S = list(S)
        ring = ring or S[0].ring
        S = initial_space(S, ring, degree_cap)
    ring = S.ring
    V = S
    if target is not None and V.contains(target):
        return V
    for _ in range(max_steps):
        mode = exact
        if mode is None:
            mode = bool(ring.field.p) and ring.field.p ** V.dim <= enum_cap
        try:
            W = f1_step(V, exact=mode, enum_cap=enum_cap, hints=hints, budget=budget)
        except EnumerationCapExceeded:
            if exact:
                raise
            W = f1_step(V, exact=False, hints=hints, budget=budget)
        if W.dim == V.dim:
            W.closed = True
            return W
        V = W
        if target is not None and V.contains(target):
            return V
    V.notes.append("max_steps reached")
    return V


def colon_space(V: FSpace, c: Poly, ring: Ring | None = None) -> FSpace:
    """{f in D : deg f <= cap, c*f in V} as a span."""
    ring = ring or V.ring
    if not c:
        raise ValueError("colon by zero")
    cap = V.degree_cap - c.degree()
    if cap < 0:
        return FSpace(SpanBasis(ring), V.degree_cap, closed=V.closed, exact=V.exact)
    monos = [m for m in monomials_upto(ring.nvars, cap) if ring.monomial_in_D(m)]
    images = [V.basis.remainder(c.mul_monomial(m)) for m in monos]
    kern = kernel_vectors(images)
    polys = []
    for t in kern:
        polys.append(Poly(ring, {m: v for m, v in zip(monos, t) if v}))
    basis = SpanBasis(ring).extend(polys)
    return FSpace(basis, V.degree_cap, closed=V.closed, exact=V.exact)


def intersect_degree(V: FSpace, cap: int) -> SpanBasis:
    """The subspace of V made of polynomials of total degree <= cap."""
    ring = V.ring
    rows = V.polys()
    highs = [Poly(ring, {m: c for m, c in r.terms.items() if sum(m) > cap}, _clean=True) for r in rows]
    kern = kernel_vectors(highs)
    out = []
    for t in kern:
        w = ring.zero
        for c, r in zip(t, rows):
            if c:
                w = w + r.scale(c)
        out.append(w)
    return SpanBasis(ring).extend(out)
