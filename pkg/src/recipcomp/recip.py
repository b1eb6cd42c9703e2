"""Elements of R(D) as unit-fraction sums.

A ``UnitFractionSum`` is a plain list of nonzero denominators; the element is
sum(1/d).  Negative terms are written with a negated denominator.

The heavy lifting lives in ``decompose``: given a/b it looks for a
replayable expression over reciprocals, first by certificate search in
factroid closures, then by a few algebraic rewrites.  ``invert_unit`` adds
the sub-sum recursion for units 1 + sum(1/f_i).
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field
from fractions import Fraction
from math import ceil

from .budget import Budget, BudgetExhausted
from .expr import Expr, Frac, RatFunc, Recip, add, flatten, frac_sum, mul, scalar
from .factor import CapExceeded, factor_known, monic_candidates, monomials_upto
from .factroid import EnumerationCapExceeded, factroid_closure
from .poly import Poly, Ring, divmod_univariate, leading_form, parse_poly, weighted_degree


class DegenerateSplit(ValueError):
    pass


class NotAUnit(ValueError):
    pass


class DecomposeFail(RuntimeError):
    """No decomposition found within budget.  Not a proof of non-membership."""

    def __init__(self, msg, report=None):
        super().__init__(msg)
        self.report = report or {}


@dataclass(frozen=True)
class UnitFractionSum:
    ring: Ring
    denominators: tuple
    # optional (scalar, monic atoms) per denominator, for fast exact evaluation
    factored: tuple | None = field(default=None, compare=False, repr=False)
    certificate: Expr | None = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        ds = tuple(Poly(self.ring, d.terms, _clean=True) for d in self.denominators)
        for d in ds:
            if not d:
                raise ZeroDivisionError("zero denominator")
            if not self.ring.contains(d):
                raise ValueError(f"denominator {d} is not in {self.ring}")
        object.__setattr__(self, "denominators", ds)

    def __len__(self):
        return len(self.denominators)

    def __iter__(self):
        return iter(self.denominators)

    def value(self) -> Frac:
        ring = self.ring
        if self.factored is not None:
            parts = [Frac.recip_factored(c, atoms, ring) for c, atoms in self.factored]
        else:
            parts = [Frac.recip(d) for d in self.denominators]
        return frac_sum(parts, ring)

    def to_json(self):
        return {"denominators": [format_denominator(d) for d in self.denominators]}

    @classmethod
    def from_json(cls, obj, ring):
        return cls(ring, tuple(parse_poly(t, ring) for t in obj["denominators"]))

    def __str__(self):
        if not self.denominators:
            return "0"
        return " + ".join(f"1/({format_denominator(d)})" for d in self.denominators)


def format_denominator(d: Poly) -> str:
    if not d.ring.field.p and d.lc() < 0:
        return f"-({-d})"
    return str(d)


def ufs(ring: Ring, dens) -> UnitFractionSum:
    return UnitFractionSum(ring, tuple(ring(d) if not isinstance(d, Poly) else d for d in dens))


def parse_unit_fraction_sum(text: str, ring: Ring) -> UnitFractionSum:
    """Parse ``1 + 1/x - 1/(x+1) + 2/(x*y)`` style input.

    Each top-level term is ``c`` or ``c/den``; the term c/den becomes the
    denominator den/c."""
    terms = _split_top(text)
    dens = []
    fld = ring.field
    for sign, t in terms:
        num_txt, slash, den_txt = _split_slash(t)
        c = parse_poly(num_txt, ring.full) if num_txt else ring.one
        if not c.is_constant() or not c:
            raise ValueError(f"numerator of {t!r} must be a nonzero constant")
        c = c.constant_coeff() * sign
        den = parse_poly(den_txt, ring) if slash else ring.one
        dens.append(den.scale(fld.inv(c)))
    return UnitFractionSum(ring, tuple(dens))


def _split_top(text):
    out, depth, cur, sign = [], 0, "", 1
    s = text.strip()
    i = 0
    while i < len(s):
        ch = s[i]
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        if depth == 0 and ch in "+-" and cur.strip() and not cur.rstrip().endswith(("^", "*", "/")):
            out.append((sign, cur.strip()))
            cur, sign = "", (1 if ch == "+" else -1)
        elif depth == 0 and ch in "+-" and not cur.strip():
            sign *= 1 if ch == "+" else -1
        else:
            cur += ch
        i += 1
    if cur.strip():
        out.append((sign, cur.strip()))
    if not out:
        raise ValueError("empty sum")
    return out


def _split_slash(t):
    depth = 0
    for i, ch in enumerate(t):
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        elif ch == "/" and depth == 0:
            num = t[:i].strip()
            den = t[i + 1:].strip()
            # a rational literal like 1/2 is a constant term
            if re.fullmatch(r"\d+", num) and re.fullmatch(r"\d+", den):
                return t, "", ""
            return num, "/", den
    return t, "", ""


# -- basic operations --------------------------------------------------------


def to_ratfunc(s: UnitFractionSum) -> RatFunc:
    """Exact value as num/den.  The denominator is the atom-wise lcm of the
    (monic parts of the) denominators, which for distinct coprime inputs is
    their product."""
    return s.value().to_ratfunc()


def ratfunc_equal(a: RatFunc, b: RatFunc) -> bool:
    return a.num * b.den == b.num * a.den


def constant_part(s: UnitFractionSum):
    fld = s.ring.field
    u = fld.zero
    for d in s.denominators:
        if d.is_constant():
            u = fld.normalize(u + fld.inv(d.constant_coeff()))
    return u


def is_unit_graded(s: UnitFractionSum, ring: Ring | None = None) -> bool:
    """u + sum 1/f_i with f_i nonconstant is a unit iff u != 0."""
    return constant_part(s) != 0


def split_identity(f: Poly, u) -> UnitFractionSum:
    """1/f = 1/(f+u) + 1/(u^{-1} f (f+u))."""
    ring = f.ring
    fld = ring.field
    u = fld(u)
    if not u:
        raise DegenerateSplit("u must be nonzero")
    g = f + ring.const(u)
    if not f or not g:
        raise DegenerateSplit(f"f + u vanishes for f={f}, u={fld.fmt(u)}")
    return UnitFractionSum(ring, (g, (f * g).scale(fld.inv(u))))


def distinctify(s: UnitFractionSum, budget=10_000) -> UnitFractionSum:
    """Rewrite to pairwise distinct denominators with the same value.

    Duplicates are removed by splitting the highest-degree duplicated
    denominator with the first u in 1, 2, 3, ... whose two new denominators
    are not already present.  Duplicated constants are folded first."""
    ring = s.ring
    fld = ring.field
    budget = Budget.of(budget)
    dens = list(s.denominators)

    consts = [d for d in dens if d.is_constant()]
    if len(consts) != len(set(consts)):
        u = fld.zero
        for d in consts:
            u = fld.normalize(u + fld.inv(d.constant_coeff()))
        dens = [d for d in dens if not d.is_constant()]
        if u:
            dens.insert(0, ring.const(fld.inv(u)))

    while True:
        counts: dict = {}
        for d in dens:
            counts[d] = counts.get(d, 0) + 1
        dups = [d for d, k in counts.items() if k > 1]
        if not dups:
            return UnitFractionSum(ring, tuple(dens))
        budget.spend()
        f = max(dups, key=Poly.sort_key)
        present = set(dens)
        done = False
        for u in _scalars(fld):
            try:
                pair = split_identity(f, u).denominators
            except DegenerateSplit:
                continue
            if pair[0] in present or pair[1] in present or pair[0] == pair[1]:
                continue
            i = len(dens) - 1 - dens[::-1].index(f)
            dens[i:i + 1] = list(pair)
            done = True
            break
        if not done:
            # every split collides: merge the k copies into one term k/f
            k = counts[f]
            dens = [d for d in dens if d != f]
            kk = fld(k)
            if kk:
                merged = f.scale(fld.inv(kk))
                dens.append(merged)


def _scalars(fld, limit=64):
    if fld.p:
        return range(1, fld.p)
    return (Fraction(k) for k in range(1, limit + 1))


# -- valuations ---------------------------------------------------------------


class _Inf:
    def __repr__(self):
        return "INF"

    def __lt__(self, other):
        return False

    def __le__(self, other):
        return other is self

    def __gt__(self, other):
        return other is not self

    def __ge__(self, other):
        return True

    def __add__(self, other):
        return self

    __radd__ = __add__


INF = _Inf()


@dataclass(frozen=True)
class Valuation:
    value: object  # int >= 0 or INF

    @property
    def is_unit(self) -> bool:
        return self.value == 0


@dataclass(frozen=True)
class NotInW:
    """deg num > deg den: outside the degree overring, so outside R."""

    excess: int


def valuation_graded(rf: RatFunc, ring: Ring | None = None, w=None):
    ring = ring or rf.ring
    w = w or ring.weights
    if not rf.num:
        return Valuation(INF)
    v = weighted_degree(rf.den, w) - weighted_degree(rf.num, w)
    if v < 0:
        return NotInW(-v)
    return Valuation(v)


def is_egyptian(d: Poly, ring: Ring | None = None) -> str:
    """"Yes" for nonzero constants, "No" for positive degree.

    Every supported ring is graded by total degree with degree-zero part K,
    so there is no "Unknown" case in practice."""
    if not d:
        raise ValueError("0 is not a denominator")
    if d.is_constant():
        return "Yes"
    return "No"


def greedy_egyptian_rational(q) -> list:
    """Strictly increasing n_i with sum 1/n_i == q (Fibonacci's greedy rule,
    started at n = 1 so that q >= 1 is handled by a harmonic prefix)."""
    q = Fraction(q)
    if q <= 0:
        raise ValueError("q must be positive")
    out = []
    n = 1
    while q:
        n = max(n, ceil(1 / q))
        out.append(n)
        q -= Fraction(1, n)
        n += 1
    return out


# -- decomposition ------------------------------------------------------------


@dataclass
class SearchConfig:
    budget: Budget
    c_cap: int = 4
    enum_cap: int = 1 << 20
    max_depth: int = 2
    max_closure_steps: int = 12
    hints: tuple = ()
    weights: tuple | None = None
    rewrites: bool = True
    multipliers: bool = True
    memo: dict = field(default_factory=dict)
    exhausted: list = field(default_factory=list)


def default_weights(ring: Ring):
    n = ring.nvars
    ws = [tuple(ring.weights), (1,) * n]
    for i in range(n):
        ws.append(tuple(1 if j == i else 0 for j in range(n)))
    out = []
    for w in ws:
        if w not in out:
            out.append(w)
    return out


def weight_obstruction(a: Poly, b: Poly, weights):
    for w in weights:
        if weighted_degree(a, w) > weighted_degree(b, w):
            return w
    return None


def positive_weight(ring: Ring, weights=None):
    for w in (weights or []) + [tuple(ring.weights), (1,) * ring.nvars]:
        if all(k > 0 for k in w):
            return tuple(w)
    return (1,) * ring.nvars


def proportional(f: Poly, g: Poly):
    """λ with f == λ g, or None."""
    if not f or not g:
        return None
    lam = f.ring.field.div(f.lc(), g.lc())
    return lam if f == g.scale(lam) else None


def univariate_expr(a: Poly, b: Poly) -> Expr:
    """Certificate for a/b in R(K[x]) when deg a <= deg b.

    Equal degrees: peel off the constant lc(a)/lc(b).  Otherwise with
    b = q*a + r, a/b = 1/q - r/(q*b), and deg r < deg a."""
    ring = a.ring
    fld = ring.field
    if a.degree() > b.degree():
        raise ValueError("deg a > deg b: not in R")
    parts = []
    sign = fld.one
    while a:
        if a.degree() == b.degree():
            lam = fld.div(a.lc(), b.lc())
            parts.append(scalar(ring, fld.normalize(sign * lam)))
            a = a - b.scale(lam)
            continue
        q, r = divmod_univariate(b, a)
        parts.append(Recip(q.scale(fld.inv(sign))))
        a, b = r, q * b
        sign = fld.normalize(-sign)
    if not parts:
        return scalar(ring, 0)
    return add(*parts)


def decompose_expr(a: Poly, b: Poly, ring: Ring | None = None, budget=None, hints=(), config=None) -> Expr:
    """Certificate expression for a/b, or raise DecomposeFail."""
    ring = ring or b.ring
    if not a or not b:
        raise ValueError("a and b must be nonzero")
    cfg = config or SearchConfig(Budget.of(budget), hints=tuple(hints))
    # a cheap pass with c = 1 throughout, then the full multiplier search
    levels = (False, True) if cfg.multipliers else (False,)
    e = None
    try:
        for full in levels:
            cfg.multipliers = full
            e = _decompose(a, b, ring, cfg, 0)
            if e is not None:
                break
    except BudgetExhausted as exc:
        raise DecomposeFail(str(exc), {"budget": cfg.budget.report(), "exhausted": cfg.exhausted}) from None
    if e is None:
        raise DecomposeFail("no decomposition found", {"budget": cfg.budget.report(), "exhausted": cfg.exhausted})
    return e


def decompose(a: Poly, b: Poly, ring: Ring | None = None, budget=None, hints=(), config=None) -> UnitFractionSum:
    ring = ring or b.ring
    e = decompose_expr(a, b, ring, budget, hints, config)
    return expr_to_sum(e, ring)


def expr_to_sum(e: Expr, ring: Ring) -> UnitFractionSum:
    terms = flatten(e, ring)
    fld = ring.field
    dens = []
    fact = []
    for c, atoms, den in terms:
        dens.append(den.scale(fld.inv(c)))
        fact.append((fld.inv(c), atoms))
    return UnitFractionSum(ring, tuple(dens), tuple(fact), e)


def _decompose(a: Poly, b: Poly, ring: Ring, cfg: SearchConfig, depth: int):
    key = (a, b, cfg.multipliers)
    if key in cfg.memo:
        return cfg.memo[key]
    cfg.memo[key] = None  # guards against rewrite cycles
    e = _decompose_inner(a, b, ring, cfg, depth)
    cfg.memo[key] = e
    return e


def _decompose_inner(a, b, ring, cfg, depth):
    lam = proportional(a, b)
    if lam is not None:
        return scalar(ring, lam)
    if b.is_constant():
        return None  # a is not a constant multiple of b, so deg a > deg b
    weights = list(cfg.weights or default_weights(ring))
    if weight_obstruction(a, b, weights):
        return None
    if ring.nvars == 1 and not ring.gens:
        return univariate_expr(a, b)
    # same leading form: shift (a/b in R iff (a - λb)/b in R)
    w = positive_weight(ring, weights)
    if weighted_degree(a, w) == weighted_degree(b, w):
        lam = proportional(leading_form(a, w), leading_form(b, w))
        if lam is None:
            return None
        rest = a - b.scale(lam)
        sub = _decompose(rest, b, ring, cfg, depth)
        if sub is None:
            return None
        return add(scalar(ring, lam), sub)

    e = _certificate_search(a, b, ring, cfg)
    if e is not None:
        return e
    if cfg.rewrites and depth < cfg.max_depth:
        return _rewrite_search(a, b, ring, cfg, depth)
    return None


def _closure_member(a, b, ring, cfg, hints):
    """Expression for a/b if a lies in the (approximate) closure [b]."""
    cfg.budget.spend()
    try:
        V = factroid_closure([b], ring, hints=hints, enum_cap=cfg.enum_cap, budget=cfg.budget,
                             max_steps=cfg.max_closure_steps, target=a)
    except EnumerationCapExceeded:
        cfg.exhausted.append("enumeration")
        return None
    except CapExceeded:
        cfg.exhausted.append("degree")
        return None
    if not V.exact:
        if "inner-closure" not in cfg.exhausted:
            cfg.exhausted.append("inner-closure")
    return V.express(a)


def multiplier_candidates(b: Poly, ring: Ring, c_cap: int, hints=()):
    """Deterministic multipliers c (monic, in D), c = 1 first.

    Monomials and monic polynomials by increasing degree (all of them over
    GF(p)); over QQ also x_i + s and products of known factors of b and
    b + u."""
    seen = set()

    def ok(c):
        if c.is_constant() or c in seen or not ring.contains(c):
            return False
        seen.add(c)
        return True

    yield ring.one
    fld = ring.field
    extra = []
    if not fld.p:
        known = []
        for u in (0, 1, -1, 2, -2, 3, -3):
            fp = factor_known(b + u, hints)
            known.extend(f for f, _ in fp.factors)
        for f in known:
            if f.degree() <= c_cap:
                extra.append(f)
        for f, g in itertools.combinations(known, 2):
            if f.degree() + g.degree() <= c_cap:
                extra.append(f * g)
    for c in extra:
        if ok(c):
            yield c
    if fld.p:
        for c in monic_candidates(ring, c_cap):
            if ok(c):
                yield c
        return
    for d in range(1, c_cap + 1):
        for m in monomials_upto(ring.nvars, d):
            if sum(m) == d and ok(ring.monomial(m)):
                yield ring.monomial(m)
        if d == 1:
            for i in range(ring.nvars):
                for s in (1, -1, 2, -2, 3, -3):
                    c = ring.var(i) + s
                    if ok(c):
                        yield c


def _certificate_search(a, b, ring, cfg):
    hints = tuple(cfg.hints)
    for c in multiplier_candidates(b, ring, cfg.c_cap if cfg.multipliers else 0, hints):
        cb = c * b
        ca = c * a
        if cb.degree() > max(b.degree() + cfg.c_cap, 0):
            continue
        e = _closure_member(ca, cb, ring, cfg, hints + ((c,) if not c.is_constant() else ()))
        if e is not None:
            return e
        if not cfg.multipliers:
            break
    return None


def _rewrite_search(a, b, ring, cfg, depth):
    fld = ring.field
    # associate split: b = g + t with t a lower-degree term, t/g in the maximal ideal
    for m, c in sorted(b.terms.items(), key=lambda mc: (sum(mc[0]), mc[0])):
        t = ring.monomial(m, c)
        g = b - t
        if not g or t.degree() >= g.degree() or not ring.contains(g):
            continue
        cfg.budget.spend()
        sub_t = _decompose(t, g, ring, cfg, depth + 1)
        if sub_t is None:
            continue
        sub_a = _decompose(a, g, ring, cfg, depth + 1)
        if sub_a is None:
            continue
        theta = add(scalar(ring, 1), sub_t)
        inv = invert_expr(theta, ring, cfg)
        if inv is None:
            continue
        return mul(sub_a, inv)

    # split on the denominator: a/b = a/(b+u) * (1 + u/b)
    for u in (fld.units() if fld.p else iter([Fraction(1), Fraction(-1), Fraction(2), Fraction(-2)])):
        if not fld.p and abs(u) > 2:
            break
        bu = b + u
        if not bu or bu.degree() < b.degree():
            continue
        cfg.budget.spend()
        sub = _decompose(a, bu, ring, cfg, depth + 1)
        if sub is not None:
            return mul(sub, add(scalar(ring, 1), Recip(b.scale(fld.inv(u)))))
        if fld.p and u >= 2:
            break

    # factorwise: a = a1*a2, b = b1*b2
    fa = factor_known(a, cfg.hints)
    fb = factor_known(b, cfg.hints)
    bf = [f for f, m in fb.factors for _ in range(m)]
    af = [f for f, m in fa.factors for _ in range(m)]
    if len(bf) >= 2:
        for r in range(1, len(bf)):
            for idx in itertools.combinations(range(len(bf)), r):
                b1 = _prod([bf[i] for i in idx], ring)
                b2 = _prod([bf[i] for i in range(len(bf)) if i not in idx], ring)
                if not (ring.contains(b1) and ring.contains(b2)):
                    continue
                for ra in range(0, len(af) + 1):
                    for ja in itertools.combinations(range(len(af)), ra):
                        a1 = _prod([af[i] for i in ja], ring).scale(fa.unit)
                        a2 = _prod([af[i] for i in range(len(af)) if i not in ja], ring)
                        if not (ring.contains(a1) and ring.contains(a2)):
                            continue
                        if a1.degree() > b1.degree() or a2.degree() > b2.degree():
                            continue
                        cfg.budget.spend()
                        s1 = _decompose(a1, b1.scale(fb.unit), ring, cfg, depth + 1)
                        if s1 is None:
                            continue
                        s2 = _decompose(a2, b2, ring, cfg, depth + 1)
                        if s2 is None:
                            continue
                        return mul(s1, s2)
    return None


def _prod(fs, ring):
    out = ring.one
    for f in fs:
        out = out * f
    return out


# -- units ------------------------------------------------------------------------


def invert_expr(theta: Expr, ring: Ring, cfg: SearchConfig | None = None) -> Expr | None:
    """Expression for 1/theta where theta is a unit of R(D)."""
    s = expr_to_sum(theta, ring)
    if not is_unit_graded(s):
        return None
    return _inverse_identity(s, ring)


def _inverse_identity(s: UnitFractionSum, ring: Ring) -> Expr:
    """1/P for P = u + sum 1/f_i (f_i nonconstant, u != 0), by recursion over
    sub-sums.

    With P_j = P - 1/f_j, U = prod_j P_j and Q(t) = prod_j (t - 1/f_j):
    U = Q(P), and P*T = U - Q(0) for T = (Q(P) - Q(0))/P, so
        1/P = (1/U) * (T + (-1)^n / N),   N = prod f * P  in D.
    Every P_j has one fraction fewer, which drives the recursion."""
    fld = ring.field
    u = constant_part(s)
    if not u:
        raise NotAUnit("constant part is zero")
    fs = [d.scale(u) for d in s.denominators if not d.is_constant()]
    # 1/s = u^{-1} * 1/(1 + sum 1/(u f_i))
    memo: dict = {}
    inv = _inv_subset(tuple(range(len(fs))), fs, ring, memo)
    ui = fld.inv(u)
    return inv if ui == fld.one else mul(scalar(ring, ui), inv)


def _inv_subset(idx: tuple, fs, ring, memo) -> Expr:
    if idx in memo:
        return memo[idx]
    fld = ring.field
    n = len(idx)
    if n == 0:
        out = scalar(ring, 1)
        memo[idx] = out
        return out
    T = _horner_T(idx, fs, ring)
    prod_f = _prod([fs[i] for i in idx], ring)
    N = prod_f
    for j in idx:
        N = N + _prod([fs[i] for i in idx if i != j], ring)
    sign_n = fld.one if n % 2 == 0 else fld.normalize(-fld.one)
    inner = add(T, Recip(N.scale(fld.inv(sign_n))))
    U_inv = [
        _inv_subset(tuple(i for i in idx if i != j), fs, ring, memo) for j in idx
    ]
    out = mul(*U_inv, inner) if U_inv else inner
    memo[idx] = out
    return out


def _horner_T(idx, fs, ring) -> Expr:
    """T = sum_{k<n} (-1)^k e_k P^{n-1-k}, evaluated by Horner with the
    exact simplification T_1 = P - e_1 = 1."""
    fld = ring.field
    n = len(idx)
    P = add(scalar(ring, 1), *[Recip(fs[i]) for i in idx])
    T = scalar(ring, 1)
    for k in range(2, n):
        ek = _elementary(idx, k, fs, ring)
        if k % 2 == 0:
            T = add(mul(T, P), ek)
        else:
            T = add(mul(T, P), mul(scalar(ring, fld.normalize(-fld.one)), ek))
    return T


def _elementary(idx, k, fs, ring) -> Expr:
    terms = [Recip(_prod([fs[i] for i in comb], ring)) for comb in itertools.combinations(idx, k)]
    return add(*terms)


def invert_unit(s: UnitFractionSum, ring: Ring | None = None, budget=None, quick_search=True) -> UnitFractionSum:
    """Inverse of a unit of R(D) as a unit-fraction sum; the product with s
    is exactly 1.  Tries the certificate search on den/num first (cheaply),
    then the sub-sum recursion."""
    ring = ring or s.ring
    if not is_unit_graded(s):
        raise NotAUnit(f"{s} is not a unit")
    e = None
    if quick_search:
        rf = to_ratfunc(s)
        cfg = SearchConfig(Budget(60 if budget is None else min(60, Budget.of(budget).limit)),
                           rewrites=False, multipliers=False, max_closure_steps=4)
        try:
            e = _decompose(rf.den, rf.num, ring, cfg, 0)
        except BudgetExhausted:
            e = None
    if e is None:
        e = _inverse_identity(s, ring)
    return expr_to_sum(e, ring)


def product_is_one(s: UnitFractionSum, r: UnitFractionSum) -> bool:
    v = s.value() * r.value()
    return v.num == v.den()
