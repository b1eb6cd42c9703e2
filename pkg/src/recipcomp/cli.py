"""Command-line front end.

Exit codes: 0 for a definitive answer, 2 when the answer is unknown or a
search gave up within its caps, 64 for usage errors, 65 for input that
parses but violates a precondition (for instance inverting a non-unit).
Output is JSON with sorted keys, so runs are byte-stable.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from .budget import Budget, BudgetExhausted
from .factroid import ENUM_CAP, colon_space, f1_step, factroid_closure, initial_space
from .field import CoefficientError
from .membership import MemberConfig, factor_hints, member, oracle_member_gf, verify_certificate
from .poly import NotInSubalgebra, PolySyntaxError, parse_poly, parse_ring
from .primes import (
    L_of_pf_truncated,
    chain_consistent,
    irred_conditions_report,
    Linalg2Fail,
    linalg2_witness,
    monomial_prime_lattice,
    p_of_W_member,
    prime_contains,
    pseudoradical_member_2var,
    verify_linalg2,
)
from .recip import (
    DecomposeFail,
    NotAUnit,
    SearchConfig,
    decompose,
    distinctify,
    greedy_egyptian_rational,
    invert_unit,
    parse_unit_fraction_sum,
    product_is_one,
)

EXIT_OK, EXIT_UNKNOWN, EXIT_USAGE, EXIT_DATA, EXIT_REPLAY = 0, 2, 64, 65, 70


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


DEFAULT_CAPS = {"c_cap": 4, "enum_cap": ENUM_CAP, "e_max": 4, "cap": 3, "depth": 2}


def parse_caps(text: str | None) -> dict:
    caps = dict(DEFAULT_CAPS)
    if not text:
        return caps
    for item in text.split(","):
        key, sep, val = item.partition("=")
        key = key.strip()
        if not sep or key not in caps:
            raise UsageError(f"bad --caps entry {item!r}; known keys: {', '.join(sorted(caps))}")
        try:
            caps[key] = int(val)
        except ValueError:
            raise UsageError(f"--caps {key} needs an integer") from None
    return caps


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--ring", default="QQ[x,y]", help='ring spec, e.g. "QQ[x,y]" or "GF(2)[x;gens=x^2,x^3]"')
    common.add_argument("--budget", type=int, default=2000, help="search step budget")
    common.add_argument("--caps", default=None, help="c_cap=4,enum_cap=1048576,e_max=4,cap=3,depth=2")
    common.add_argument("--seed", type=int, default=0, help="seed for randomized commands")
    common.add_argument("--format", choices=("json", "text"), default="json")
    common.add_argument("--replay", action="store_true", help="re-verify certificates before printing")
    common.add_argument("--jobs", type=int, default=1, help="worker processes where supported")

    p = _Parser(prog="recipcomp", description="Exact computation in reciprocal complements R(D).")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def cmd(name, help_):
        return sub.add_parser(name, parents=[common], help=help_)

    c = cmd("member", "is a/b in R(D)?")
    c.add_argument("a")
    c.add_argument("b")
    c = cmd("decompose", "write a/b as a sum of unit fractions")
    c.add_argument("a")
    c.add_argument("b")
    c = cmd("invert", "inverse of a unit given as a unit-fraction sum")
    c.add_argument("sum")
    c = cmd("distinctify", "rewrite a unit-fraction sum with distinct denominators")
    c.add_argument("sum")
    c = cmd("factroid", "factroid closure (or one F_1 step) of polynomials")
    c.add_argument("polys", nargs="+")
    c.add_argument("--one-step", action="store_true")
    c.add_argument("--degree-cap", type=int, default=None)
    c = cmd("colon", "the colon space (V : c) for V spanned by polynomials")
    c.add_argument("polys", nargs="+")
    c.add_argument("--by", required=True)
    c.add_argument("--closure", action="store_true", help="close V under F_1 first")
    c = cmd("prime-contains", "is p_g contained in p_f?")
    c.add_argument("g")
    c.add_argument("f")
    c = cmd("lattice", "monomial prime lattice of R(K[x_1..x_n])")
    c.add_argument("n", type=int)
    c.add_argument("--dot", action="store_true", help="print the DOT graph only")
    c = cmd("pseudoradical", "is 1/f in the pseudoradical (two variables)?")
    c.add_argument("f")
    c = cmd("linalg2", "linear-dependency witness h for x/(fg)^N")
    c.add_argument("f")
    c.add_argument("g")
    c.add_argument("--var", default=None, help="target variable (default: the first)")
    c = cmd("l-of-pf", "degree-truncated inner approximation of L(p_f)")
    c.add_argument("f")
    c = cmd("p-of-w", "is 1/x in p(W) for the monoid W generated by polynomials?")
    c.add_argument("x")
    c.add_argument("gens", nargs="+")
    c = cmd("irred-report", "the irreducibility ladder for g")
    c.add_argument("g")
    c = cmd("greedy", "greedy Egyptian fraction of a positive rational")
    c.add_argument("q")
    c = cmd("oracle", "exhaustive finite-field membership oracle")
    c.add_argument("a")
    c.add_argument("b")
    cmd("verify-paper", "run the reproduction suite")
    return p


def _poly(text, ring):
    return parse_poly(text, ring)


def _emit(obj, fmt, out):
    if fmt == "json":
        out.write(json.dumps(obj, sort_keys=True, indent=2, ensure_ascii=False) + "\n")
    else:
        out.write(_text(obj) + "\n")


def _text(obj, indent=0) -> str:
    pad = "  " * indent
    if isinstance(obj, dict):
        lines = []
        for k in sorted(obj):
            v = obj[k]
            if isinstance(v, (dict, list)) and v:
                lines.append(f"{pad}{k}:")
                lines.append(_text(v, indent + 1))
            else:
                lines.append(f"{pad}{k}: {v}")
        return "\n".join(lines)
    if isinstance(obj, list):
        return "\n".join(f"{pad}- {_text(v, 0) if not isinstance(v, (dict, list)) else chr(10) + _text(v, indent + 1)}"
                         for v in obj)
    return f"{pad}{obj}"


def _member_config(args, caps, hints=()):
    return MemberConfig(c_cap=caps["c_cap"], enum_cap=caps["enum_cap"], budget=args.budget, hints=tuple(hints),
                        max_depth=caps["depth"])


def run(argv=None, out=None) -> int:
    out = out or sys.stdout
    try:
        args = build_parser().parse_args(argv)
        caps = parse_caps(args.caps)
        ring = parse_ring(args.ring)
    except UsageError as exc:
        sys.stderr.write(f"usage error: {exc}\n")
        return EXIT_USAGE
    except (ValueError, PolySyntaxError) as exc:
        sys.stderr.write(f"usage error: {exc}\n")
        return EXIT_USAGE
    try:
        return _dispatch(args, caps, ring, out)
    except (PolySyntaxError, NotInSubalgebra, CoefficientError, UsageError) as exc:
        sys.stderr.write(f"usage error: {exc}\n")
        return EXIT_USAGE
    except (NotAUnit, Linalg2Fail, ValueError, ZeroDivisionError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_DATA


def _dispatch(args, caps, ring, out) -> int:
    fmt = args.format
    c = args.command

    if c == "member":
        a, b = _poly(args.a, ring), _poly(args.b, ring)
        v = member(a, b, ring, _member_config(args, caps, factor_hints(args.b, ring)))
        if args.replay and v.certificate is not None and not verify_certificate(v, a, b, ring):
            sys.stderr.write("replay failed\n")
            return EXIT_REPLAY
        _emit(v.to_json(), fmt, out)
        return EXIT_UNKNOWN if v.verdict == "unknown" else EXIT_OK

    if c == "decompose":
        a, b = _poly(args.a, ring), _poly(args.b, ring)
        cfg = SearchConfig(Budget(args.budget), c_cap=caps["c_cap"], enum_cap=caps["enum_cap"], max_depth=caps["depth"],
                           hints=tuple(factor_hints(args.b, ring)))
        try:
            s = decompose(a, b, ring, config=cfg)
        except DecomposeFail as exc:
            _emit({"result": "fail", "reason": str(exc), "report": exc.report}, fmt, out)
            return EXIT_UNKNOWN
        if args.replay:
            v = s.value()
            if v.num * b != a * v.den():
                sys.stderr.write("replay failed\n")
                return EXIT_REPLAY
        _emit({**s.to_json(), "certificate": s.certificate.to_json() if s.certificate else None}, fmt, out)
        return EXIT_OK

    if c == "invert":
        s = parse_unit_fraction_sum(args.sum, ring)
        try:
            r = invert_unit(s, ring, budget=args.budget)
        except BudgetExhausted as exc:
            _emit({"result": "fail", "reason": str(exc)}, fmt, out)
            return EXIT_UNKNOWN
        if args.replay and not product_is_one(s, r):
            sys.stderr.write("replay failed\n")
            return EXIT_REPLAY
        _emit(r.to_json(), fmt, out)
        return EXIT_OK

    if c == "distinctify":
        s = parse_unit_fraction_sum(args.sum, ring)
        try:
            r = distinctify(s, budget=args.budget)
        except BudgetExhausted as exc:
            _emit({"result": "fail", "reason": str(exc)}, fmt, out)
            return EXIT_UNKNOWN
        _emit(r.to_json(), fmt, out)
        return EXIT_OK

    if c == "factroid":
        S = [_poly(t, ring) for t in args.polys]
        if args.one_step:
            V = f1_step(S, ring, args.degree_cap, enum_cap=caps["enum_cap"])
        else:
            V = factroid_closure(S, ring, args.degree_cap, enum_cap=caps["enum_cap"])
        _emit(_space_json(V), fmt, out)
        return EXIT_OK

    if c == "colon":
        S = [_poly(t, ring) for t in args.polys]
        V = factroid_closure(S, ring, enum_cap=caps["enum_cap"]) if args.closure else initial_space(S, ring)
        W = colon_space(V, _poly(args.by, ring))
        _emit(_space_json(W), fmt, out)
        return EXIT_OK

    if c == "prime-contains":
        g, f = _poly(args.g, ring), _poly(args.f, ring)
        v = prime_contains(g, f, ring, caps["e_max"], _member_config(args, caps))
        _emit(v.to_json(), fmt, out)
        return EXIT_UNKNOWN if v.status == "unknown" else EXIT_OK

    if c == "lattice":
        names = ",".join(["x", "y", "z", "w"][: args.n]) if 1 <= args.n <= 4 else "x"
        lring = ring if ring.nvars == args.n and not ring.gens else parse_ring(f"{ring.field}[{names}]")
        rep = monomial_prime_lattice(args.n, lring, caps["e_max"], jobs=args.jobs)
        if args.dot:
            out.write(rep["dot"] + "\n")
        else:
            _emit(rep, fmt, out)
        return EXIT_UNKNOWN if rep["unknown"] else EXIT_OK

    if c == "pseudoradical":
        v = pseudoradical_member_2var(_poly(args.f, ring), ring, hints=factor_hints(args.f, ring))
        _emit(v.to_json(), fmt, out)
        return EXIT_UNKNOWN if v.status == "unknown" else EXIT_OK

    if c == "linalg2":
        f, g = _poly(args.f, ring), _poly(args.g, ring)
        idx = ring.vars.index(args.var) if args.var else 0
        w = linalg2_witness(f, g, ring, idx, config=_member_config(args, caps, (f, g)))
        res = w.to_json()
        res["replayed"] = verify_linalg2(w, f, g, idx)
        _emit(res, fmt, out)
        return EXIT_OK if w.follow_up is None or w.follow_up.is_in else EXIT_UNKNOWN

    if c == "l-of-pf":
        f = _poly(args.f, ring)
        L = L_of_pf_truncated(f, ring, caps["cap"], caps["e_max"], _member_config(args, caps, (f,)))
        _emit(L.to_json(), fmt, out)
        return EXIT_OK

    if c == "p-of-w":
        x = _poly(args.x, ring)
        gens = [_poly(t, ring) for t in args.gens]
        v = p_of_W_member(x, gens, ring, args.budget, caps["e_max"])
        _emit(v.to_json(), fmt, out)
        return EXIT_UNKNOWN if v.status == "unknown" else EXIT_OK

    if c == "irred-report":
        g = _poly(args.g, ring)
        rep = irred_conditions_report(g, ring, caps["e_max"], args.budget, hints=factor_hints(args.g, ring))
        obj = {k: v.to_json() for k, v in rep.items()}
        obj["chain_consistent"] = chain_consistent(rep)
        _emit(obj, fmt, out)
        return EXIT_OK

    if c == "greedy":
        try:
            q = Fraction(args.q)
        except ValueError:
            raise UsageError(f"not a rational: {args.q!r}") from None
        _emit({"q": str(q), "denominators": greedy_egyptian_rational(q)}, fmt, out)
        return EXIT_OK

    if c == "oracle":
        a, b = _poly(args.a, ring), _poly(args.b, ring)
        r = oracle_member_gf(a, b, ring, caps["c_cap"], caps["enum_cap"])
        _emit(r.to_json(), fmt, out)
        return EXIT_OK

    if c == "verify-paper":
        from .acceptance import run_all

        lines = []
        checks = run_all(echo=lines.append)
        if fmt == "json":
            _emit({"checks": [{"criterion": k.number, "title": k.title, "pass": k.ok, "detail": k.detail}
                              for k in checks]}, fmt, out)
        else:
            out.write("\n".join(lines) + "\n")
        return EXIT_OK if all(k.ok for k in checks) else 1

    raise UsageError(f"unknown command {c!r}")


def _space_json(V):
    return {
        "dim": V.dim,
        "degree_cap": V.degree_cap,
        "closed": V.closed,
        "exact": V.exact,
        "basis": [str(p) for p in V.polys()],
    }


def main(argv=None) -> int:
    return run(argv)


if __name__ == "__main__":
    sys.exit(main())
