"""Exact numeric substrate: rationals, the Cantor pairing, dyadics, certified roots.

Rationals are :class:`fractions.Fraction`, which already keeps numerator and
denominator coprime with a positive denominator. Nothing here ever rounds.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import isqrt
from typing import Union

Rational = Fraction

#: Width bound for every certified square-root enclosure.
ROOT_BITS = 40


def pair(n: int, k: int) -> int:
    """Cantor pairing ``((n+k)^2 + n + 3k) / 2``; a bijection N x N -> N."""
    if n < 0 or k < 0:
        raise ValueError("pair is defined on naturals only")
    return ((n + k) ** 2 + n + 3 * k) // 2


def unpair(p: int) -> tuple[int, int]:
    """Inverse of :func:`pair`."""
    if p < 0:
        raise ValueError("unpair is defined on naturals only")
    # diagonal d = n + k is the largest d with d(d+1)/2 <= p
    d = (isqrt(8 * p + 1) - 1) // 2
    k = p - d * (d + 1) // 2
    return d - k, k


def dyadic(m: int) -> Fraction:
    """Exactly ``2**-m``."""
    if m < 0:
        raise ValueError("dyadic exponent must be >= 0")
    return Fraction(1, 1 << m)


def signed_dyadic(m: int, sign: int = 1) -> Fraction:
    return dyadic(m) if sign >= 0 else -dyadic(m)


@dataclass(frozen=True)
class Interval:
    """Closed rational interval enclosing an irrational value."""

    lo: Fraction
    hi: Fraction

    def __post_init__(self):
        if self.lo > self.hi:
            raise ValueError("empty interval")

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    @property
    def mid(self) -> Fraction:
        return (self.lo + self.hi) / 2

    def contains(self, q) -> bool:
        return self.lo <= q <= self.hi

    def __float__(self):
        return float(self.mid)

    def __add__(self, other):
        if isinstance(other, Interval):
            return Interval(self.lo + other.lo, self.hi + other.hi)
        return Interval(self.lo + other, self.hi + other)

    __radd__ = __add__

    def __neg__(self):
        return Interval(-self.hi, -self.lo)

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, q: Fraction) -> "Interval":
        a, b = self.lo * q, self.hi * q
        return Interval(min(a, b), max(a, b))


Value = Union[Fraction, Interval]


def as_interval(v: Value) -> Interval:
    return v if isinstance(v, Interval) else Interval(Fraction(v), Fraction(v))


def divide(v: Value, q: Fraction) -> Value:
    if isinstance(v, Interval):
        return v.scale(1 / Fraction(q))
    return Fraction(v) / q


def negate(v: Value) -> Value:
    return -v


def add(a: Value, b: Value) -> Value:
    if isinstance(a, Interval) or isinstance(b, Interval):
        return as_interval(a) + as_interval(b)
    return a + b


def within(v: Value, target, tol) -> bool:
    """True when every point of ``v`` lies within ``tol`` of ``target``."""
    iv = as_interval(v)
    return abs(iv.lo - target) <= tol and abs(iv.hi - target) <= tol


def exact_sqrt(q: Fraction) -> Fraction | None:
    """The rational square root of ``q`` if there is one."""
    if q < 0:
        raise ValueError("negative radicand")
    a, b = q.numerator, q.denominator
    ra, rb = isqrt(a), isqrt(b)
    if ra * ra == a and rb * rb == b:
        return Fraction(ra, rb)
    return None


def sqrt_value(q: Fraction, bits: int = ROOT_BITS) -> Value:
    """Exact root when ``q`` is a rational square, else an enclosure of width 2**-bits."""
    q = Fraction(q)
    r = exact_sqrt(q)
    if r is not None:
        return r
    scaled = (q.numerator << (2 * bits)) // q.denominator
    lo = Fraction(isqrt(scaled), 1 << bits)
    return Interval(lo, lo + Fraction(1, 1 << bits))


def to_decimal(q: Fraction, places: int = 12) -> str:
    """Render ``q`` rounded half-away-from-zero to a fixed number of places.

    Pure integer arithmetic, so the output never depends on locale or floats.
    """
    q = Fraction(q)
    scale = 10 ** places
    neg = q < 0
    n = abs(q) * scale
    units = (n.numerator * 2 + n.denominator) // (2 * n.denominator)
    if units == 0:
        neg = False
    whole, frac = divmod(units, scale)
    body = f"{whole}.{frac:0{places}d}" if places else str(whole)
    return ("-" if neg else "") + body
