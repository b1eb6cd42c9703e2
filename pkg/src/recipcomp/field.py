"""Exact coefficient fields: the rationals and prime fields GF(p), p <= 97.

Scalars are plain Python values: ``fractions.Fraction`` over QQ and ``int``
in ``range(p)`` over GF(p).  Nothing here ever touches floating point.
"""

from __future__ import annotations

import itertools
import math
import re
from dataclasses import dataclass
from fractions import Fraction

MAX_PRIME = 97


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    return all(n % d for d in range(2, math.isqrt(n) + 1))


class CoefficientError(ValueError):
    """A scalar that does not exist in the coefficient field (e.g. 1/2 in GF(2))."""


@dataclass(frozen=True)
class FieldSpec:
    """Either ``FieldSpec.QQ`` or ``FieldSpec.gf(p)``."""

    p: int = 0  # 0 means the rationals

    def __post_init__(self):
        if self.p:
            if not _is_prime(self.p) or self.p > MAX_PRIME:
                raise ValueError(f"GF(p) needs a prime p <= {MAX_PRIME}, got {self.p}")

    @classmethod
    def gf(cls, p: int) -> "FieldSpec":
        return cls(p)

    @property
    def is_prime_field(self) -> bool:
        return self.p != 0

    @property
    def zero(self):
        return 0 if self.p else Fraction(0)

    @property
    def one(self):
        return 1 if self.p else Fraction(1)

    def __call__(self, value):
        """Coerce an int, Fraction or ``"a/b"`` string into the field."""
        if isinstance(value, str):
            value = _parse_rational(value)
        if self.p:
            if isinstance(value, Fraction):
                if value.denominator % self.p == 0:
                    raise CoefficientError(f"{value} is not defined in GF({self.p})")
                return value.numerator * pow(value.denominator, -1, self.p) % self.p
            return int(value) % self.p
        return Fraction(value)

    def normalize(self, c):
        return c % self.p if self.p else c

    def inv(self, c):
        if self.p:
            c %= self.p
            if c == 0:
                raise ZeroDivisionError("inverse of 0")
            return pow(c, -1, self.p)
        return 1 / Fraction(c)

    def div(self, a, b):
        return self.normalize(a * self.inv(b))

    def elements(self):
        if not self.p:
            raise ValueError("QQ is infinite")
        return range(self.p)

    def units(self):
        """Nonzero scalars in a fixed order: 1, 2, 3, ... (QQ never ends)."""
        if self.p:
            return iter(range(1, self.p))
        return (Fraction(k) for k in itertools.count(1))

    def fmt(self, c) -> str:
        if self.p:
            return str(c % self.p)
        c = Fraction(c)
        return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"

    def __str__(self):
        return f"GF({self.p})" if self.p else "QQ"


FieldSpec.QQ = FieldSpec(0)

_RAT = re.compile(r"\s*([+-]?\d+)\s*(?:/\s*(\d+))?\s*$")


def _parse_rational(text: str) -> Fraction:
    m = _RAT.match(text)
    if not m:
        raise ValueError(f"not a rational literal: {text!r}")
    num = int(m.group(1))
    den = int(m.group(2)) if m.group(2) else 1
    if den == 0:
        raise CoefficientError("zero denominator")
    return Fraction(num, den)


def parse_field(text: str) -> FieldSpec:
    text = text.strip()
    if text in ("QQ", "Q"):
        return FieldSpec.QQ
    m = re.fullmatch(r"GF\(\s*(\d+)\s*\)", text)
    if m:
        return FieldSpec.gf(int(m.group(1)))
    raise ValueError(f"unknown field {text!r}; use QQ or GF(p)")
