"""Exact row reduction on polynomials viewed as coefficient vectors.

Columns are monomials in descending graded-lex order, so the pivot of a row
is its leading monomial.  Rows remember how they were built from the input
generators, which lets ``in_span`` answer with coefficients on the inputs.
"""

from __future__ import annotations

from .poly import Poly, Ring, grlex_key


class SpanBasis:
    """Reduced row echelon basis of the K-span of ``generators``.

    Immutable in spirit: ``extend`` returns a new basis."""

    __slots__ = ("ring", "generators", "rows", "combos")

    def __init__(self, ring: Ring, generators=(), rows=(), combos=()):
        self.ring = ring
        self.generators = tuple(generators)
        self.rows = tuple(rows)  # (pivot, {monomial: coeff}) with coeff[pivot] == 1
        self.combos = tuple(combos)  # {generator index: coeff}

    @property
    def dim(self) -> int:
        return len(self.rows)

    def __len__(self):
        return len(self.rows)

    @property
    def ambient_monomials(self) -> list:
        ms = {m for _, r in self.rows for m in r}
        return sorted(ms, key=grlex_key, reverse=True)

    @property
    def pivots(self) -> list:
        return [pv for pv, _ in self.rows]

    def basis_polys(self) -> list:
        return [Poly(self.ring, dict(r), _clean=True) for _, r in self.rows]

    def _reduce(self, terms: dict, combo: dict):
        """Eliminate pivots from ``terms`` in place, recording the multiples
        of rows subtracted into ``combo`` (as generator coefficients)."""
        p = self.ring.field.p
        for (pv, row), rc in zip(self.rows, self.combos):
            c = terms.get(pv)
            if not c:
                continue
            for m, v in row.items():
                nv = terms.get(m, 0) - c * v
                if p:
                    nv %= p
                if nv:
                    terms[m] = nv
                else:
                    terms.pop(m, None)
            for j, v in rc.items():
                nv = combo.get(j, 0) + c * v
                if p:
                    nv %= p
                if nv:
                    combo[j] = nv
                else:
                    combo.pop(j, None)

    def remainder(self, f: Poly) -> Poly:
        t = dict(f.terms)
        self._reduce(t, {})
        return Poly(self.ring, t, _clean=True)

    def contains(self, f: Poly) -> bool:
        return not self.remainder(f)

    def __contains__(self, f):
        return self.contains(f)

    def coefficients(self, f: Poly):
        """Coefficients on ``generators`` reproducing f, or None."""
        t = dict(f.terms)
        combo: dict = {}
        self._reduce(t, combo)
        if t:
            return None
        return [combo.get(i, self.ring.field.zero) for i in range(len(self.generators))]

    def extend(self, polys) -> "SpanBasis":
        fld = self.ring.field
        p = fld.p
        gens = list(self.generators)
        rows = [(pv, dict(r)) for pv, r in self.rows]
        combos = [dict(c) for c in self.combos]
        for f in polys:
            idx = len(gens)
            gens.append(f)
            t = dict(f.terms)
            acc: dict = {}
            SpanBasis(self.ring, gens, rows, combos)._reduce(t, acc)
            # t = f - sum(acc_j g_j)
            combo = {j: (-v) % p if p else -v for j, v in acc.items()}
            combo[idx] = fld.one
            if not t:
                continue
            pv = max(t, key=grlex_key)
            inv = fld.inv(t[pv])
            t = {m: (v * inv) % p if p else v * inv for m, v in t.items()}
            combo = {j: (v * inv) % p if p else v * inv for j, v in combo.items()}
            combo = {j: v for j, v in combo.items() if v}
            # clear the new pivot from the old rows
            for k, ((opv, orow), oc) in enumerate(zip(rows, combos)):
                c = orow.get(pv)
                if not c:
                    continue
                for m, v in t.items():
                    nv = orow.get(m, 0) - c * v
                    if p:
                        nv %= p
                    if nv:
                        orow[m] = nv
                    else:
                        orow.pop(m, None)
                for j, v in combo.items():
                    nv = oc.get(j, 0) - c * v
                    if p:
                        nv %= p
                    if nv:
                        oc[j] = nv
                    else:
                        oc.pop(j, None)
            rows.append((pv, t))
            combos.append(combo)
            order = sorted(range(len(rows)), key=lambda k: grlex_key(rows[k][0]), reverse=True)
            rows = [rows[k] for k in order]
            combos = [combos[k] for k in order]
        return SpanBasis(self.ring, gens, rows, combos)

    def __eq__(self, other):
        if not isinstance(other, SpanBasis):
            return NotImplemented
        return [(pv, r) for pv, r in self.rows] == [(pv, r) for pv, r in other.rows]

    def __hash__(self):
        return hash(tuple((pv, frozenset(r.items())) for pv, r in self.rows))

    def __repr__(self):
        return f"SpanBasis(dim={self.dim}, basis=[{', '.join(map(str, self.basis_polys()))}])"


def span_of(polys, ring: Ring | None = None) -> SpanBasis:
    polys = list(polys)
    if ring is None:
        if not polys:
            raise ValueError("span_of([]) needs an explicit ring")
        ring = polys[0].ring
    return SpanBasis(ring).extend(polys)


def in_span(f: Poly, basis: SpanBasis):
    """Coefficients (one per generator of ``basis``) with sum c_i g_i == f,
    or None when f is not in the span."""
    return basis.coefficients(f)


def find_linear_dependency(polys):
    """A nonzero u with sum u_i * polys[i] == 0, or None if independent.

    Scans the inputs in order and stops at the first one that falls into the
    span of its predecessors; that index carries coefficient 1."""
    polys = list(polys)
    if not polys:
        return None
    ring = polys[0].ring
    basis = SpanBasis(ring)
    for k, f in enumerate(polys):
        coeffs = basis.coefficients(f)
        if coeffs is not None:
            fld = ring.field
            u = [fld.normalize(-c) for c in coeffs] + [fld.one] + [fld.zero] * (len(polys) - k - 1)
            return u
        basis = basis.extend([f])
    return None


def combine(coeffs, polys, ring: Ring | None = None) -> Poly:
    ring = ring or polys[0].ring
    out = ring.zero
    for c, f in zip(coeffs, polys):
        if c:
            out = out + f.scale(c)
    return out
