"""Degree bookkeeping for twisted sheaves supported on curves in |h|."""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from fractions import Fraction
from typing import List, Tuple

from .errors import InvalidInput, NotCoprime


def _positive(x, name) -> int:
    x = int(x)
    if x < 1:
        raise InvalidInput(f"must be >= 1, got {x}", name)
    return x


def degree_window(d, r: int, m: int) -> Fraction:
    """d reduced modulo m·r into [0, m·r)."""
    d = Fraction(d)
    r, m = _positive(r, "r"), _positive(m, "m")
    return d - math.floor(d / (m * r)) * m * r


def enumerate_degrees(p: int, r: int, m: int) -> List[Fraction]:
    r, m = _positive(r, "r"), _positive(m, "m")
    if math.gcd(int(p), r) != 1:
        raise NotCoprime(f"gcd({p}, {r}) = {math.gcd(int(p), r)}")
    base = Fraction(int(p), r)
    return [base + i for i in range(m)]


@dataclass(frozen=True)
class TwistedMukaiVector:
    """(0, r·h, s) with s ∈ (1/dA)·Z."""

    r: int
    h: Tuple[int, ...]
    s: Fraction
    dA: int = 1

    def __post_init__(self):
        if int(self.r) < 0:
            raise InvalidInput("rank multiplier must be >= 0", "r")
        dA = _positive(self.dA, "dA")
        s = Fraction(self.s)
        if (s * dA).denominator != 1:
            raise InvalidInput(f"s = {s} is not in (1/{dA})Z", "s")
        object.__setattr__(self, "r", int(self.r))
        object.__setattr__(self, "h", tuple(int(x) for x in self.h))
        object.__setattr__(self, "s", s)
        object.__setattr__(self, "dA", dA)

    def components(self):
        return (0, tuple(self.r * x for x in self.h), self.s)


def tensor_shift(v: TwistedMukaiVector, pairing_Lh: int) -> TwistedMukaiVector:
    """Twist by a line bundle L with (L.h) = pairing_Lh."""
    return replace(v, s=v.s + v.r * int(pairing_Lh))


def check_algebra_degree(order: int, dA: int):
    """The order of a Brauer class divides the degree of any algebra representing it."""
    dA = _positive(dA, "dA")
    if dA % int(order):
        raise InvalidInput(f"class order {order} does not divide algebra degree {dA}", "dA")
