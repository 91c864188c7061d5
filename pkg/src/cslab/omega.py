"""The bump family omega_nu, the decision-driven sum Z, and their geometry.

``omega(nu, x)`` is ``sqrt(3*2**-nu*|x| - x**2 - 2**(1-2*nu))`` on
``2**-nu <= |x| <= 2**(1-nu)`` and 0 elsewhere.  Radicands are evaluated
exactly; the root is returned as a :class:`~fractions.Fraction` when it is
rational and as an :class:`~cslab.numeric.Interval` of width ``<= 2**-40``
otherwise.  Supports of different ``nu`` only share endpoints, where every
bump is 0, so at any ``x`` at most one bump is nonzero.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Callable

from .errors import DegenerateInterval
from .numeric import ROOT_BITS, Value, add, divide, dyadic, negate, sqrt_value
from .subject import SubjectTrace, decided_by

#: Slope of the two tangents through the origin, squared.
TANGENT_SLOPE_SQUARED = Fraction(1, 8)


def support(nu: int) -> tuple[Fraction, Fraction]:
    return dyadic(nu), 2 * dyadic(nu)


def radicand(nu: int, x) -> Fraction:
    x = abs(Fraction(x))
    return 3 * dyadic(nu) * x - x * x - 2 * dyadic(2 * nu)


def omega(nu: int, x, bits: int = ROOT_BITS) -> Value:
    if nu < 1:
        raise ValueError("nu must be a positive natural")
    x = Fraction(x)
    lo, hi = support(nu)
    if not lo <= abs(x) <= hi:
        return Fraction(0)
    rad = radicand(nu, x)
    assert rad >= 0, "radicand is non-negative on the support"
    return sqrt_value(rad, bits)


def bump_index(x) -> int | None:
    """The ``nu`` whose support interior contains ``x`` (None at 0 or |x| >= 1)."""
    a = abs(Fraction(x))
    if a == 0 or a >= 1:
        return None
    nu = 1
    while a <= dyadic(nu):
        nu += 1
    return nu


def sum_omega(x, nu_max: int | None = None, bits: int = ROOT_BITS) -> Value:
    """``sum_nu omega_nu(x)``, optionally truncated to ``nu <= nu_max``."""
    nu = bump_index(x)
    if nu is None or (nu_max is not None and nu > nu_max):
        return Fraction(0)
    return omega(nu, x, bits)


def Z_eval(trace: SubjectTrace, atom: str, x, depth: int) -> Value:
    """``sum_{nu <= depth} zeta(nu)(x)`` where ``zeta(nu)`` is ``omega_nu`` until
    ``atom`` or its negation is evident by stage ``nu`` and 0 from then on.

    Once a decision is on the trace the sum is complete; otherwise bumps with
    ``nu > depth`` are simply not included.
    """
    depth = min(depth, trace.horizon)
    nu = bump_index(x)
    if nu is None or nu > depth or decided_by(trace, nu, atom):
        return Fraction(0)
    return omega(nu, x)


def Z_function(trace: SubjectTrace, atom: str, depth: int | None = None) -> Callable:
    d = trace.horizon if depth is None else depth
    return lambda x: Z_eval(trace, atom, x, d)


def _ratio_squared(nu: int, x: Fraction) -> Fraction:
    return radicand(nu, x) / (x * x)


def tangency_search(nu: int, resolution: Fraction = Fraction(1, 1 << 40)) -> tuple[Fraction, Value]:
    """Maximise ``omega_nu(x)/x`` over the positive support by ternary search.

    The squared ratio is searched (no roots during the search); it is
    unimodal because it is a concave quadratic in ``1/x``.  Returns the
    maximiser (within ``resolution``) and the slope there.
    """
    resolution = Fraction(resolution)
    if resolution < Fraction(1, 1 << 40):
        raise ValueError("resolution finer than 2**-40 is not supported")
    lo, hi = support(nu)
    while hi - lo > resolution:
        third = (hi - lo) / 3
        m1, m2 = lo + third, hi - third
        if _ratio_squared(nu, m1) < _ratio_squared(nu, m2):
            lo = m1
        else:
            hi = m2
        # keep denominators dyadic so they do not grow with the iteration count
        lo = _floor_dyadic(lo, 64 + nu)
        hi = _ceil_dyadic(hi, 64 + nu)
    x = (lo + hi) / 2
    return x, sqrt_value(_ratio_squared(nu, x))


def _floor_dyadic(q: Fraction, bits: int) -> Fraction:
    return Fraction((q.numerator << bits) // q.denominator, 1 << bits)


def _ceil_dyadic(q: Fraction, bits: int) -> Fraction:
    return Fraction(-((-q.numerator << bits) // q.denominator), 1 << bits)


def tangent_abscissa(nu: int) -> Fraction:
    """Closed form of the touch point: ``2**(2-nu) / 3``."""
    return Fraction(4, 3) * dyadic(nu)


def difference_quotient(f: Callable[[Fraction], Value], a, b) -> Value:
    a, b = Fraction(a), Fraction(b)
    if a == b:
        raise DegenerateInterval(f"difference quotient over [{a}, {b}]")
    return divide(add(f(b), negate(f(a))), b - a)
