"""Prime-spectrum queries on R(D).

p_f is the prime of R maximal among those avoiding 1/f.  Containment
p_g ⊆ p_f holds exactly when f/g^e lies in R for some e >= 1, so each query
below reduces to ``member`` calls and inherits their certificates.
"""

from __future__ import annotations

import itertools
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

from .factor import (
    CapExceeded,
    divisors_in_ring,
    factor_exhaustive_gf,
    factor_known,
    is_irreducible_certified,
    monomials_upto,
)
from .factroid import factroid_closure, intersect_degree
from .linalg import SpanBasis, find_linear_dependency
from .membership import IN, OUT, MemberConfig, Verdict, certificate_from_json, member, verify_certificate
from .poly import Poly, Ring, parse_ring

HOLDS, FAILS, IMPLIED, UNKNOWN = "holds", "fails", "implied", "unknown"


def _json_cert(v: Verdict):
    return v.certificate.to_json() if v.certificate else None


# -- containment ---------------------------------------------------------------------


@dataclass
class ContainmentVerdict:
    status: str  # holds | fails | unknown
    e: int | None = None
    verdicts: list = field(default_factory=list)  # one member verdict per e tried

    def to_json(self):
        return {
            "status": self.status,
            "e": self.e,
            "per_e": [{"e": k + 1, **v.to_json()} for k, v in enumerate(self.verdicts)],
        }


def prime_contains(g: Poly, f: Poly, ring: Ring | None = None, e_max: int = 4, config: MemberConfig | None = None):
    """Is p_g ⊆ p_f?  Holds(e) with an In certificate for f/g^e, Fails when
    every e <= e_max has an Out certificate, Unknown otherwise."""
    ring = ring or f.ring
    if f.is_constant() or g.is_constant():
        raise ValueError("f and g must be nonconstant")
    cfg = config or MemberConfig(budget=400)
    cfg = MemberConfig(**{**cfg.__dict__, "hints": tuple(cfg.hints) + (g,)})
    out = []
    ge = ring.one
    for _ in range(e_max):
        ge = ge * g
        v = member(f, ge, ring, cfg)
        out.append(v)
        if v.is_in:
            return ContainmentVerdict(HOLDS, len(out), out)
    if all(v.is_out for v in out):
        return ContainmentVerdict(FAILS, e_max, out)
    return ContainmentVerdict(UNKNOWN, None, out)


def _subset_poly(J, ring):
    out = ring.one
    for i in J:
        out = out * ring.var(i)
    return out


def _subset_name(J, ring):
    return "{" + ",".join(ring.vars[i] for i in J) + "}"


def _lattice_pair(args):
    ring_text, J, Jp, e_max = args
    ring = parse_ring(ring_text)
    # p_{J'} ⊆ p_J  iff  x_J / x_{J'}^e in R; J = ∅ gives p_∅ = m
    f = _subset_poly(J, ring)
    g = _subset_poly(Jp, ring)
    cfg = MemberConfig(budget=200)
    per_e = []
    ge = ring.one
    for _ in range(e_max):
        ge = ge * g
        v = member(f, ge, ring, cfg)
        per_e.append(v.to_json())
        if v.is_in or not Jp:
            break
    return J, Jp, per_e


def monomial_prime_lattice(n: int, ring: Ring | None = None, e_max: int = 4, jobs: int = 1) -> dict:
    """Containments among the primes p_J := p_{prod_{i in J} x_i} of
    R(K[x_1..x_n]), with heights n - #J.

    Every ordered pair (J, J') is settled by ``member``.  The result lists
    all pairs, the Hasse edges and a DOT rendering, plus a check that the
    order is the reversed subset order."""
    if not 1 <= n <= 4:
        raise ValueError("n must be between 1 and 4")
    if ring is None:
        names = ["x", "y", "z", "w"][:n]
        ring = parse_ring(f"QQ[{','.join(names)}]")
    if ring.nvars != n or ring.gens:
        raise ValueError("needs the full polynomial ring in n variables")
    subsets = [J for k in range(n + 1) for J in itertools.combinations(range(n), k)]
    tasks = [(str(ring), J, Jp, e_max) for J in subsets for Jp in subsets]
    if jobs > 1:
        with ProcessPoolExecutor(jobs) as ex:
            results = list(ex.map(_lattice_pair, tasks, chunksize=8))
    else:
        results = [_lattice_pair(t) for t in tasks]

    pairs = []
    holds = set()
    unknown = 0
    consistent = True
    for J, Jp, per_e in results:
        last = per_e[-1]
        if last["verdict"] == IN:
            status = HOLDS
            holds.add((Jp, J))
        elif all(v["verdict"] == OUT for v in per_e):
            status = FAILS
        else:
            status = UNKNOWN
            unknown += 1
        expected = set(J) <= set(Jp)
        if (status == HOLDS) != expected or status == UNKNOWN:
            consistent = False
        pairs.append({
            "sub": _subset_name(Jp, ring),
            "sup": _subset_name(J, ring),
            "status": status,
            "e": len(per_e) if status == HOLDS else None,
            "certificates": [v["certificate"] for v in per_e],
        })
    # Hasse edges: p_{J'} ⊊ p_J covering, i.e. J ⊂ J' with one element more
    edges = []
    for J, Jp, per_e in results:
        if (Jp, J) in holds and len(Jp) == len(J) + 1 and set(J) < set(Jp):
            edges.append({
                "from": _subset_name(Jp, ring),
                "to": _subset_name(J, ring),
                "e": len(per_e),
                "certificate": per_e[-1]["certificate"],
            })
    nodes = [{"J": _subset_name(J, ring), "height": n - len(J), "maximal": not J} for J in subsets]
    dot = ["digraph primes {", "  rankdir=BT;"]
    for nd in nodes:
        dot.append(f'  "{nd["J"]}" [label="p_{nd["J"]}\\nht {nd["height"]}"];')
    for ed in edges:
        dot.append(f'  "{ed["from"]}" -> "{ed["to"]}";')
    dot.append("}")
    return {
        "ring": str(ring),
        "nodes": nodes,
        "edges": edges,
        "pairs": pairs,
        "unknown": unknown,
        "anti_isomorphic": consistent,
        "dot": "\n".join(dot),
    }


def verify_lattice(report: dict, ring: Ring) -> bool:
    """Replay every certificate in a lattice report."""
    names = {}
    for k in range(ring.nvars + 1):
        for J in itertools.combinations(range(ring.nvars), k):
            names[_subset_name(J, ring)] = J
    for pr in report["pairs"]:
        f = _subset_poly(names[pr["sup"]], ring)
        g = _subset_poly(names[pr["sub"]], ring)
        ge = ring.one
        for cj in pr["certificates"]:
            ge = ge * g
            if cj is None or not verify_certificate(certificate_from_json(cj, ring), f, ge, ring):
                return False
    return True


# -- pseudoradical ----------------------------------------------------------------------


@dataclass
class PseudoradicalVerdict:
    status: str  # yes | no | unknown
    factors: tuple = ()

    def to_json(self):
        return {"status": self.status, "factors": [str(f) for f in self.factors]}


def _irreducible_factors(f: Poly, factored=None, hints=()):
    ring = f.ring
    if factored is not None:
        if factored.expand() != f:
            raise ValueError("supplied factorization does not expand to f")
        return factored
    if ring.field.p:
        return factor_exhaustive_gf(f, ring)
    return factor_known(f, hints)


def pseudoradical_member_2var(f: Poly, ring: Ring | None = None, factored=None, hints=()) -> PseudoradicalVerdict:
    """Is 1/f in the pseudoradical of R(K[x,y])?  Yes iff f has two
    non-associated irreducible factors."""
    ring = ring or f.ring
    if ring.nvars != 2 or ring.gens:
        raise ValueError("the criterion is only available for K[x,y]")
    if f.is_constant():
        raise ValueError("f must be nonconstant")
    fp = _irreducible_factors(f, factored, hints)
    certified = [h for h, _ in fp.factors if fp.complete or is_irreducible_certified(h)]
    if len(certified) >= 2:
        return PseudoradicalVerdict("yes", tuple(certified[:2]))
    if fp.complete and len(fp.factors) == 1:
        return PseudoradicalVerdict("no", (fp.factors[0][0],))
    return PseudoradicalVerdict("unknown", tuple(h for h, _ in fp.factors))


# -- linalg2 -------------------------------------------------------------------------------


@dataclass
class Linalg2Witness:
    N: int
    h: Poly
    coeffs: dict  # (i, j) -> u_ij
    trivial: bool = False
    follow_up: Verdict | None = None

    def to_json(self):
        return {
            "N": self.N,
            "h": str(self.h),
            "coeffs": {f"{i},{j}": self.h.ring.field.fmt(u) for (i, j), u in self.coeffs.items()},
            "trivial": self.trivial,
            "follow_up": self.follow_up.to_json() if self.follow_up else None,
        }


class Linalg2Fail(ValueError):
    pass


def _product_order(N):
    idx = [(i, j) for i in range(N + 1) for j in range(N + 1)]
    return sorted(idx, key=lambda ij: (max(ij), ij[0] + ij[1], ij[0]))


def linalg2_witness(f: Poly, g: Poly, ring: Ring | None = None, var_index: int = 0, n_max: int | None = None,
                    follow_up: bool = True, config: MemberConfig | None = None) -> Linalg2Witness:
    """Find h = sum u_ij f^i g^j (i, j <= N), h != 0, divisible by x_v.

    The u come from a linear dependency among f_1^i g_1^j where f_1, g_1 are
    f, g with x_v set to 0; the products are scanned by max(i, j), then
    i + j, then i, and the earliest closing dependency wins.  Since every
    f^i g^j divides (fg)^N, h and with it x_v lie in the factroid of (fg)^N,
    so x_v/(fg)^N is in R; ``follow_up`` asks ``member`` for that
    certificate."""
    ring = ring or f.ring
    if ring.nvars != 2:
        raise Linalg2Fail("needs a two-variable ring")
    if f.is_constant() or g.is_constant():
        raise Linalg2Fail("f and g must be nonconstant")
    if f.constant_coeff() or g.constant_coeff():
        raise Linalg2Fail("f and g must have zero constant term")
    x = ring.var(var_index)
    cfg = config or MemberConfig(budget=2000, hints=(f, g))
    for cand, other, i_j in ((f, g, (1, 0)), (g, f, (0, 1))):
        if cand.try_divexact(x) is not None:
            w = Linalg2Witness(1, cand, {i_j: ring.field.one}, trivial=True)
            if follow_up:
                w.follow_up = member(x, f * g, ring, cfg)
            return w
    f1 = f.subs_zero(var_index)
    g1 = g.subs_zero(var_index)
    n_max = n_max if n_max is not None else f.degree() + g.degree() + 1
    order = _product_order(n_max)
    # powers are cheap to cache, the dependency scan stops at the first hit
    fp = [ring.one]
    gp = [ring.one]
    for _ in range(n_max):
        fp.append(fp[-1] * f1)
        gp.append(gp[-1] * g1)
    polys = [fp[i] * gp[j] for i, j in order]
    u = find_linear_dependency(polys)
    if u is None:
        raise Linalg2Fail(f"no dependency with N <= {n_max}")
    coeffs = {order[k]: c for k, c in enumerate(u) if c}
    N = max(max(ij) for ij in coeffs)
    h = ring.zero
    for (i, j), c in coeffs.items():
        h = h + (f ** i * g ** j).scale(c)
    if not h:
        raise Linalg2Fail("f and g are algebraically dependent: h vanishes")
    if h.try_divexact(x) is None:
        raise AssertionError("internal: h is not divisible by the target variable")
    w = Linalg2Witness(N, h, coeffs)
    if follow_up:
        w.follow_up = member(x, (f * g) ** N, ring, cfg)
    return w


def verify_linalg2(w: Linalg2Witness, f: Poly, g: Poly, var_index: int = 0) -> bool:
    ring = f.ring
    x = ring.var(var_index)
    h = ring.zero
    fgN = (f * g) ** w.N
    for (i, j), c in w.coeffs.items():
        term = f ** i * g ** j
        if i > w.N or j > w.N or fgN.try_divexact(term) is None:
            return False
        h = h + term.scale(c)
    if h != w.h or not h or h.try_divexact(x) is None:
        return False
    if w.follow_up is not None:
        return w.follow_up.is_in and verify_certificate(w.follow_up, x, fgN if not w.trivial else f * g, ring)
    return True


# -- L(p_f) and p(W) -------------------------------------------------------------------------


@dataclass
class LTruncation:
    basis: SpanBasis
    cap: int
    members: list  # (g, e, verdict or "closure")

    def contains(self, g: Poly) -> bool:
        return self.basis.contains(g)

    def to_json(self):
        return {
            "cap": self.cap,
            "dim": self.basis.dim,
            "basis": [str(p) for p in self.basis.basis_polys()],
            "members": [{"g": str(g), "e": e, "route": r} for g, e, r in self.members],
        }


def L_of_pf_truncated(f: Poly, ring: Ring | None = None, cap: int = 3, e_max: int = 4,
                      config: MemberConfig | None = None) -> LTruncation:
    """Inner approximation of L(p_f) = ⋃_e G(f^e) in degree <= cap.

    Collected: the degree-<=cap part of each closure [f^e] (every element g
    there has g/f^e in R), and each monomial of D with a positive ``member``
    verdict against some f^e."""
    ring = ring or f.ring
    if f.is_constant():
        raise ValueError("f must be nonconstant")
    cfg = config or MemberConfig(budget=300, hints=(f,))
    found = []
    basis = SpanBasis(ring)
    fe = ring.one
    powers = []
    for e in range(1, e_max + 1):
        fe = fe * f
        powers.append(fe)
        try:
            V = factroid_closure([fe], ring, hints=(f,), max_steps=8)
        except CapExceeded:
            continue
        part = intersect_degree(V, cap)
        new = [p for p in part.basis_polys() if not basis.contains(p)]
        if new:
            basis = basis.extend(new)
            found.extend((p, e, "closure") for p in new)
    for m in monomials_upto(ring.nvars, cap):
        if not ring.monomial_in_D(m):
            continue
        g = ring.monomial(m)
        if basis.contains(g):
            continue
        for e, fe in enumerate(powers, 1):
            v = member(g, fe, ring, cfg)
            if v.is_in:
                basis = basis.extend([g])
                found.append((g, e, "member"))
                break
    return LTruncation(basis, cap, found)


@dataclass
class PWVerdict:
    status: str  # not_in_p | in_p_at_bound | unknown
    witness: Poly | None = None
    verdict: Verdict | None = None
    tried: list = field(default_factory=list)

    def to_json(self):
        return {
            "status": self.status,
            "witness": str(self.witness) if self.witness is not None else None,
            "certificate": _json_cert(self.verdict) if self.verdict else None,
            "tried": [{"w": str(w), "verdict": v.verdict} for w, v in self.tried],
        }


def p_of_W_member(x: Poly, W_generators, ring: Ring | None = None, budget: int = 300, e_max: int = 4) -> PWVerdict:
    """Is 1/x in p(W) = ⋂_{f in W} p_f for the monoid W generated by the
    given polynomials?  1/x is outside p(W) as soon as some w in W has x/w
    in R; products are tried by increasing total exponent, up to e_max."""
    ring = ring or x.ring
    if not x:
        raise ValueError("x must be nonzero")
    gens = list(W_generators)
    cfg = MemberConfig(budget=budget, hints=tuple(gens))
    tried = []
    for total in range(1, e_max + 1):
        for exps in _compositions(total, len(gens)):
            w = ring.one
            for gg, k in zip(gens, exps):
                w = w * gg ** k
            v = member(x, w, ring, cfg)
            tried.append((w, v))
            if v.is_in:
                return PWVerdict("not_in_p", w, v, tried)
    if all(v.is_out for _, v in tried):
        return PWVerdict("in_p_at_bound", None, None, tried)
    return PWVerdict("unknown", None, None, tried)


def _compositions(total, parts):
    if parts == 1:
        yield (total,)
        return
    for k in range(total, -1, -1):
        for rest in _compositions(total - k, parts - 1):
            yield (k,) + rest


# -- the irreducibility ladder -------------------------------------------------------------


@dataclass
class Condition:
    status: str  # holds | fails | implied | unknown
    witness: object = None
    note: str = ""

    def to_json(self):
        w = self.witness
        if isinstance(w, Poly):
            w = str(w)
        elif isinstance(w, dict):
            w = {k: str(v) for k, v in w.items()}
        return {"status": self.status, "witness": w, "note": self.note}


def irreducible_in_ring(f: Poly, ring: Ring | None = None, hints=()):
    """True / False / None (unknown); False comes with a proper divisor in D."""
    ring = ring or f.ring
    if f.is_constant():
        return False, None
    if ring.field.p:
        fp = factor_exhaustive_gf(f, ring.full)
    else:
        fp = factor_known(f.with_ring(ring.full), hints)
    one = ring.full.one
    fm = f.with_ring(ring.full).monic()
    for d in divisors_in_ring(fp, ring):
        d = d.with_ring(ring.full)
        if d != one and d != fm:
            return False, d
    if fp.complete:
        return True, None
    return None, None


QQ_SAMPLE = (1, -1, 2, -2, 3, -3)

# (1**) ⇒ (2) ⇒ (3) ⇒ (4) ⇒ (5)
CHAIN = ("1**", "2", "3", "4", "5")


def irred_conditions_report(g: Poly, ring: Ring | None = None, e_max: int = 4, budget: int = 400,
                            hints=()) -> dict:
    """Evaluate the ladder (1**) ⇒ (2) ⇒ (3) ⇒ (4) ⇒ (5) for g:

    (5) g is irreducible in D; (4) g + u is irreducible for every scalar u;
    (3) G(g) = <1, g>; (2) 1/g is irreducible in R; (1**) G(g^e) =
    <1, g, ..., g^e> for every e.

    Failures propagate up the chain and successes down it.  (2) is never
    tested directly.  Over QQ, (4) can only be sampled, so it stays
    unknown unless a sample fails."""
    ring = ring or g.ring
    if g.is_constant():
        raise ValueError("g must be nonconstant")
    fld = ring.field
    rep = {}

    ok, div = irreducible_in_ring(g, ring, hints)
    rep["5"] = Condition(HOLDS if ok else FAILS if ok is False else UNKNOWN, div)

    scalars = list(fld.elements())[1:] if fld.p else list(QQ_SAMPLE)
    c4 = None
    undecided = rep["5"].status != HOLDS
    for u in scalars:
        ok_u, div_u = irreducible_in_ring(g + u, ring, hints)
        if ok_u is False:
            c4 = Condition(FAILS, {"u": fld.fmt(u), "factor": div_u})
            break
        undecided = undecided or ok_u is None
    if c4 is None:
        if fld.p and not undecided:
            c4 = Condition(HOLDS, note="all scalars checked")
        elif fld.p:
            c4 = Condition(UNKNOWN)
        else:
            c4 = Condition(UNKNOWN, note=f"g + u irreducible for every sampled u in {list(QQ_SAMPLE)}")
    rep["4"] = c4

    cfg = MemberConfig(budget=budget, hints=tuple(hints) + (g,))
    rep["3"] = _g_witness(g, 1, ring, cfg) or Condition(UNKNOWN, note=f"no witness of degree <= {g.degree()}")
    c1 = None
    for e in range(1, e_max + 1):
        found = _g_witness(g, e, ring, cfg)
        if found:
            c1 = Condition(FAILS, {"e": e, "witness": found.witness})
            break
    rep["1**"] = c1 or Condition(UNKNOWN, note=f"no witness for e <= {e_max}")
    rep["2"] = Condition(UNKNOWN, note="no direct test; only deduced")

    # failures move up the chain, successes down
    for k in range(len(CHAIN) - 1, 0, -1):
        lo, hi = CHAIN[k], CHAIN[k - 1]
        if rep[lo].status == FAILS and rep[hi].status == UNKNOWN:
            rep[hi] = Condition(FAILS, note=f"implied by ({lo}) failing")
    for k in range(len(CHAIN) - 1):
        hi, lo = CHAIN[k], CHAIN[k + 1]
        if rep[hi].status in (HOLDS, IMPLIED) and rep[lo].status == UNKNOWN:
            rep[lo] = Condition(IMPLIED, note=f"implied by ({hi})")
    return {c: rep[c] for c in CHAIN}


def _g_witness(g: Poly, e: int, ring: Ring, cfg: MemberConfig):
    """A monomial f of degree <= e*deg g with f/g^e in R but f outside
    <1, g, ..., g^e>."""
    ge = g ** e
    span = SpanBasis(ring).extend([g ** k for k in range(e + 1)])
    for m in monomials_upto(ring.nvars, ge.degree()):
        if not ring.monomial_in_D(m):
            continue
        f = ring.monomial(m)
        if span.contains(f):
            continue
        v = member(f, ge, ring, cfg)
        if v.is_in:
            return Condition(FAILS, f, note=f"{f}/({ge}) is in R")
    return None


def chain_consistent(rep: dict) -> bool:
    """No condition holds while a weaker one fails."""
    for k, hi in enumerate(CHAIN):
        if rep[hi].status in (HOLDS, IMPLIED):
            if any(rep[lo].status == FAILS for lo in CHAIN[k + 1:]):
                return False
    return True
