"""Membership of a/b in R(D) with replayable certificates.

The pipeline is a semidecision: ``In`` and ``Out`` always come with a
certificate that ``verify_certificate`` re-checks from scratch, and
everything the search cannot settle is ``Unknown``.

Out certificates rest on two overrings.  For a nonnegative weight w the
set W_w = {f/g : deg_w f <= deg_w g} is a ring containing every 1/d, so
deg_w a > deg_w b puts a/b outside R.  For w strictly positive, taking
leading forms maps W_w onto degree-zero fractions and sends R onto K, so
equal degrees with non-proportional leading forms also exclude a/b.
Since K lies in R, a/b and (a - λb)/b are in or out together; certificates
record the shift λ.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from .budget import Budget
from .expr import Expr, RatFunc, Recip, Scalar, add, expr_from_json, scalar
from .factor import monic_candidates
from .factroid import ENUM_CAP, factroid_closure
from .poly import Poly, Ring, leading_form, parse_poly, weighted_degree
from .recip import (
    DecomposeFail,
    SearchConfig,
    decompose_expr,
    default_weights,
    positive_weight,
    proportional,
    univariate_expr,
)

IN, OUT, UNKNOWN = "in", "out", "unknown"


@dataclass(frozen=True)
class InCertificate:
    expr: Expr
    claimed: RatFunc

    def to_json(self):
        return {"kind": "expression", "expression": self.expr.to_json(), "claimed_value": self.claimed.to_json()}


@dataclass(frozen=True)
class OutCertificate:
    kind: str  # "weight" | "leading_form" | "dvr"
    w: tuple
    shift: object = 0

    def to_json(self):
        out = {"kind": self.kind, "w": list(self.w)}
        if self.shift:
            out["shift"] = str(self.shift)
        return out


@dataclass
class Verdict:
    verdict: str
    certificate: InCertificate | OutCertificate | None = None
    caps: dict = field(default_factory=dict)
    route: str = ""

    @property
    def is_in(self):
        return self.verdict == IN

    @property
    def is_out(self):
        return self.verdict == OUT

    def to_json(self):
        return {
            "verdict": self.verdict,
            "certificate": self.certificate.to_json() if self.certificate else None,
            "caps": self.caps,
            "route": self.route,
        }


def certificate_from_json(obj, ring: Ring):
    kind = obj["kind"]
    if kind == "expression":
        claimed = RatFunc.from_json(obj["claimed_value"], ring)
        return InCertificate(expr_from_json(obj["expression"], ring), claimed)
    return OutCertificate(kind, tuple(obj["w"]), ring.field(obj.get("shift", 0)))


@dataclass
class MemberConfig:
    weights: list | None = None
    c_cap: int = 4
    enum_cap: int = ENUM_CAP
    budget: int = 2000
    hints: tuple = ()
    max_depth: int = 2

    def caps(self):
        return {"c_cap": self.c_cap, "enum_cap": self.enum_cap, "budget": self.budget}


def factor_hints(text: str, ring: Ring) -> list:
    """Top-level product factors of a polynomial string, e.g. "(x+1)*(y+1)^2"
    gives [x+1, y+1].  Only used as hints, never trusted."""
    parts, depth, cur = [], 0, ""
    for ch in text:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        if ch == "*" and depth == 0:
            parts.append(cur)
            cur = ""
        else:
            cur += ch
    parts.append(cur)
    if len(parts) < 2:
        return []
    out = []
    for p in parts:
        p = re.sub(r"\^\s*\d+\s*$", "", p.strip())
        try:
            f = parse_poly(p, ring.full)
        except ValueError:
            continue
        if not f.is_constant():
            out.append(f)
    return out


def member(a: Poly, b: Poly, ring: Ring | None = None, config: MemberConfig | None = None) -> Verdict:
    ring = ring or b.ring
    cfg = config or MemberConfig()
    if not a or not b:
        raise ValueError("member needs nonzero a and b")
    for f in (a, b):
        if not ring.contains(f):
            raise ValueError(f"{f} is not in {ring}")
    claimed = RatFunc(a, b)
    fld = ring.field
    caps = cfg.caps()

    if ring.nvars == 1 and not ring.gens:
        if a.degree() <= b.degree():
            e = univariate_expr(a, b)
            return Verdict(IN, InCertificate(e, claimed), caps, "univariate")
        return Verdict(OUT, OutCertificate("dvr", (1,)), caps, "univariate")

    weights = [tuple(w) for w in (cfg.weights or default_weights(ring))]
    pos = positive_weight(ring, weights)
    if pos not in weights:
        weights.append(pos)
    shift = fld.zero
    rest = a
    while True:
        for w in weights:
            if weighted_degree(rest, w) > weighted_degree(b, w):
                return Verdict(OUT, OutCertificate("weight", w, shift), caps, "weight")
        if weighted_degree(rest, pos) < weighted_degree(b, pos):
            break
        lam = proportional(leading_form(rest, pos), leading_form(b, pos))
        if lam is None:
            return Verdict(OUT, OutCertificate("leading_form", pos, shift), caps, "leading_form")
        shift = fld.normalize(shift + lam)
        rest = rest - b.scale(lam)
        if not rest:
            return Verdict(IN, InCertificate(scalar(ring, shift), claimed), caps, "constant")

    scfg = SearchConfig(Budget.of(cfg.budget), c_cap=cfg.c_cap, enum_cap=cfg.enum_cap, max_depth=cfg.max_depth,
                        hints=tuple(cfg.hints), weights=weights)
    try:
        e = decompose_expr(rest, b, ring, config=scfg)
    except DecomposeFail as exc:
        caps = dict(caps, **exc.report)
        return Verdict(UNKNOWN, None, caps, "search")
    if shift:
        e = add(scalar(ring, shift), e)
    return Verdict(IN, InCertificate(e, claimed), dict(caps, used=scfg.budget.used), "search")


# -- replay -------------------------------------------------------------------------


def verify_certificate(v, a: Poly, b: Poly, ring: Ring | None = None) -> bool:
    """Re-check a verdict or a bare certificate without any search."""
    ring = ring or b.ring
    cert = v.certificate if isinstance(v, Verdict) else v
    if cert is None:
        return False
    try:
        if isinstance(cert, InCertificate):
            return _verify_in(cert, a, b, ring)
        if isinstance(cert, OutCertificate):
            return _verify_out(cert, a, b, ring)
    except (ValueError, ZeroDivisionError, TypeError):
        return False
    return False


def _verify_in(cert: InCertificate, a, b, ring) -> bool:
    if not b:
        return False
    for leaf in cert.expr.leaves():
        if isinstance(leaf, Recip):
            if not leaf.d or not ring.contains(leaf.d):
                return False
        elif not isinstance(leaf, Scalar):
            return False
    val = cert.expr.value()
    if val.num * b != a * val.den():
        return False
    c = cert.claimed
    return c.num * b == a * c.den


def _verify_out(cert: OutCertificate, a, b, ring) -> bool:
    w = tuple(cert.w)
    if len(w) != ring.nvars or any(k < 0 for k in w) or not any(w):
        return False
    rest = a - b.scale(ring.field(cert.shift))
    if not rest or not b:
        return False
    if cert.kind == "weight":
        return weighted_degree(rest, w) > weighted_degree(b, w)
    if cert.kind == "dvr":
        return ring.nvars == 1 and not ring.gens and rest.degree() > b.degree()
    if cert.kind == "leading_form":
        if any(k <= 0 for k in w):
            return False
        if weighted_degree(rest, w) != weighted_degree(b, w):
            return False
        return proportional(leading_form(rest, w), leading_form(b, w)) is None
    return False


# -- exhaustive finite-field oracle ------------------------------------------------------


@dataclass
class OracleResult:
    verdict: str  # "in" | "out_at_bound"
    multiplier: Poly | None = None
    certificate: InCertificate | None = None
    checked: int = 0
    reason: str = ""

    def to_json(self):
        return {
            "verdict": self.verdict,
            "multiplier": str(self.multiplier) if self.multiplier is not None else None,
            "certificate": self.certificate.to_json() if self.certificate else None,
            "checked": self.checked,
            "reason": self.reason,
        }


_closure_cache: dict = {}


def _exact_closure(cb: Poly, enum_cap):
    key = (cb, enum_cap)
    hit = _closure_cache.get(key)
    if hit is None or hit.ring != cb.ring:
        hit = factroid_closure([cb], cb.ring, exact=True, enum_cap=enum_cap)
        if len(_closure_cache) > 2048:
            _closure_cache.clear()
        _closure_cache[key] = hit
    return hit


def oracle_member_gf(a: Poly, b: Poly, ring: Ring | None = None, c_cap: int = 4, enum_cap: int = ENUM_CAP) -> OracleResult:
    """Exhaustive check over every monic multiplier c in D with deg c <= c_cap:
    is ca in the closure [cb]?  The closure is the full factroid (exact steps
    to the fixpoint), so this covers the one-step test as well.

    ``out_at_bound`` only says that no witness exists within the caps.  When
    deg a > deg b no multiplier can help: every closure [cb] lives in degree
    <= deg cb < deg ca."""
    ring = ring or b.ring
    if not ring.field.p:
        raise ValueError("the oracle needs a prime field")
    if not a or not b:
        raise ValueError("nonzero a and b required")
    if a.degree() > b.degree():
        return OracleResult("out_at_bound", reason="degree bound: [cb] has degree <= deg cb < deg ca")
    checked = 0
    cands = [ring.one] + [c for c in monic_candidates(ring, c_cap) if ring.contains(c)]
    for c in cands:
        checked += 1
        cb, ca = c * b, c * a
        V = _exact_closure(cb, enum_cap)
        e = V.express(ca)
        if e is not None:
            return OracleResult("in", c, InCertificate(e, RatFunc(a, b)), checked)
    return OracleResult("out_at_bound", checked=checked, reason=f"no multiplier of degree <= {c_cap}")
