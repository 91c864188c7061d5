"""Constructive reals as modulus-carrying rational sequences.

A :class:`CReal` pairs a total (memoised) approximant map ``i -> Fraction``
with a modulus ``p -> N(p)``: every two approximants at indices ``>= N(p)``
differ by at most ``2**-p``.  Order relations are answered with
:class:`~cslab.verdict.Verdict` values computed from finitely many
approximants.  Positive relations can be Established; their negations are
never concluded from finite data, so the engine answers Unknown instead.
"""

from __future__ import annotations

import itertools
import threading
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Sequence

from .errors import HorizonExhausted, InvalidTerm
from .numeric import dyadic
from .verdict import Certificate, Verdict

#: How far past the inspected index the precision search may climb.
PRECISION_SLACK = 64


@dataclass(frozen=True)
class Lawlike:
    tag: str


@dataclass(frozen=True)
class ScheduleDriven:
    construction: str
    trace: object = None


class CReal:
    def __init__(self, approximant: Callable[[int], Fraction], modulus: Callable[[int], int],
                 kind=None, label: str = ""):
        self._approximant = approximant
        self._modulus = modulus
        self.kind = kind if kind is not None else Lawlike(label or "anonymous")
        self.label = label or getattr(self.kind, "tag", "") or getattr(self.kind, "construction", "")
        self._memo: dict[int, Fraction] = {}
        self._lock = threading.Lock()

    def __repr__(self):
        return f"CReal({self.label})"

    def approximant(self, i: int) -> Fraction:
        if i < 0:
            raise ValueError("approximant index must be >= 0")
        with self._lock:
            if i in self._memo:
                return self._memo[i]
        v = Fraction(self._approximant(i))
        with self._lock:
            self._memo[i] = v
        return v

    __getitem__ = approximant

    def modulus(self, p: int) -> int:
        return max(0, int(self._modulus(max(p, 0))))

    def approx(self, p: int) -> Fraction:
        """An approximant within ``2**-p`` of the limit."""
        if p < 0:
            raise ValueError("precision must be >= 0")
        return self.approximant(self.modulus(p))

    def available(self, i: int) -> bool:
        try:
            self.approximant(i)
        except HorizonExhausted:
            return False
        return True

    def prefix(self, n: int) -> tuple[Fraction, ...]:
        return tuple(self.approximant(i) for i in range(n))

    def available_prefix(self, limit: int) -> tuple[Fraction, ...]:
        """Approximants from index 0 up to the first unavailable one (or ``limit``)."""
        out = []
        for i in range(limit):
            try:
                out.append(self.approximant(i))
            except HorizonExhausted:
                break
        return tuple(out)


def constant(q, label: str | None = None) -> CReal:
    q = Fraction(q)
    return CReal(lambda i: q, lambda p: 0, Lawlike(label or f"const {q}"))


def from_function(f: Callable[[int], Fraction], modulus: Callable[[int], int], label: str) -> CReal:
    return CReal(f, modulus, Lawlike(label))


def standard_modulus(p: int) -> int:
    """Index from which values move by at most ``2**-min(i,j)+1``, i.e. ``p + 1``."""
    return p + 1


def check_modulus(x: CReal, p: int, upto: int) -> list[tuple[int, int]]:
    """Index pairs in ``[N(p), upto)`` breaking the ``2**-p`` bound (empty if sound)."""
    start = x.modulus(p)
    vals = {i: x.approximant(i) for i in range(start, upto)}
    bound = dyadic(p)
    return [(i, j) for i, j in itertools.combinations(sorted(vals), 2) if abs(vals[i] - vals[j]) > bound]


# -- certificates -------------------------------------------------------------

def stable_precision(reals: Sequence[CReal], index: int, cap: int | None = None) -> int | None:
    """Largest ``p <= cap`` for which every modulus has ``N(p) <= index``."""
    cap = index + PRECISION_SLACK if cap is None else cap
    best = None
    for p in range(cap + 1):
        if all(x.modulus(p) <= index for x in reals):
            best = p
        else:
            break
    return best


def _gap_exponent(margin: Fraction) -> int:
    """Smallest ``n`` with ``2**-n < margin`` (``margin > 0``)."""
    n = 0
    while dyadic(n) >= margin:
        n += 1
    return n


@dataclass(frozen=True)
class ApartCertificate:
    """``upper - lower > 2**-gap_exponent`` from ``index`` on.

    At ``index`` both moduli guarantee ``2**-precision`` stability and the
    approximant gap exceeds ``2**-gap_exponent + 2 * 2**-precision``.
    """

    index: int
    gap_exponent: int
    precision: int
    gap: Fraction
    side: str = "right"

    def replay(self, lower: CReal, upper: CReal) -> bool:
        if lower.modulus(self.precision) > self.index or upper.modulus(self.precision) > self.index:
            return False
        gap = upper.approximant(self.index) - lower.approximant(self.index)
        return gap == self.gap and gap > dyadic(self.gap_exponent) + 2 * dyadic(self.precision)

    def describe(self) -> str:
        return (f"{self.side}, gap {self.gap} at index {self.index}, "
                f"> 2^-{self.gap_exponent} with precision 2^-{self.precision}")


def measurably_less(x: CReal, y: CReal, depth: int) -> Verdict:
    """Certify ``x`` measurably smaller than ``y`` from indices below ``depth``.

    The margin rule turns one sample into a tail bound: at index ``i`` where
    both reals are ``2**-p`` stable, a gap above ``2**-n + 2*2**-p`` keeps
    ``y(j) - x(j) > 2**-n`` for every ``j >= i``.  Never Refuted.
    """
    for i in range(depth):
        p = stable_precision((x, y), i)
        if p is None:
            continue
        gap = y.approximant(i) - x.approximant(i)
        margin = gap - 2 * dyadic(p)
        if margin > 0:
            n = _gap_exponent(margin)
            return Verdict.established(ApartCertificate(i, n, p, gap), depth)
    return Verdict.unknown(depth)


def apart(x: CReal, y: CReal, depth: int) -> Verdict:
    """``x # y``: either side measurably smaller.  ``right`` means ``y`` is the greater."""
    v = measurably_less(x, y, depth)
    if v.is_established:
        return v
    w = measurably_less(y, x, depth)
    if w.is_established:
        c = w.certificate
        return Verdict.established(ApartCertificate(c.index, c.gap_exponent, c.precision, c.gap, "left"), depth)
    return Verdict.unknown(depth)


def coincide_up_to(x: CReal, y: CReal, p: int) -> bool:
    """Finite-precision surrogate for coincidence; not a proof that ``x = y``.

    True means the limits differ by at most ``2**-p + 2**-(p+1)``.
    """
    return abs(x.approx(p + 2) - y.approx(p + 2)) <= dyadic(p)


# -- Appendix-style embedding of positive-natural sequences ----------------------

class _Terms:
    """Lazy, cached view of a stream of naturals given as a callable or iterable."""

    def __init__(self, source):
        self._cache: list[int] = []
        if callable(source):
            self._fn = source
            self._it = None
        else:
            self._fn = None
            self._it = iter(source)
        self._lock = threading.Lock()

    def __getitem__(self, i: int) -> int:
        if self._fn is not None:
            v = int(self._fn(i))
        else:
            with self._lock:
                while len(self._cache) <= i:
                    try:
                        self._cache.append(int(next(self._it)))
                    except StopIteration:
                        raise IndexError(f"stream ended before term {i + 1}") from None
                v = self._cache[i]
        if v < 1:
            raise InvalidTerm(f"term a_{i + 1} = {v} is not a positive natural")
        return v


def eventually_constant(prefix: Iterable[int], tail: int = 1) -> Callable[[int], int]:
    prefix = list(prefix)
    return lambda i: prefix[i] if i < len(prefix) else tail


def dyadic_embed(a) -> CReal:
    """Map a stream ``a_1, a_2, ...`` of positive naturals into ``(0, 1)``.

    Value: ``sum(2**-i for i < a_1) + sum(2**-(a_1+...+a_m) for m >= 2)``.
    Approximant ``i`` keeps the terms up to ``m = i + 1``; the remaining tail
    is below ``2**-(i+1)``, so ``N(p) = p`` is a modulus.  Increasing ``a_1``
    moves the value up; increasing a later term moves it down.
    """
    terms = _Terms(a)

    def approximant(i: int) -> Fraction:
        a1 = terms[0]
        total = 1 - dyadic(a1 - 1)  # sum_{k=1}^{a1-1} 2^-k
        s = a1
        for m in range(1, i + 1):
            s += terms[m]
            total += dyadic(s)
        return total

    return CReal(approximant, lambda p: p, Lawlike("dyadic embedding"))


# -- convergence of sequences of reals ------------------------------------------

def _distance_bounds(x: CReal, y: CReal, index: int) -> tuple[Fraction, Fraction]:
    """``(observed, error)``: the limits' distance lies in ``observed +- error``."""
    p = stable_precision((x, y), index)
    d = abs(x.approximant(index) - y.approximant(index))
    if p is None:
        return d, None
    return d, 2 * dyadic(p)


def _certified_close(x, y, index, bound) -> bool:
    d, err = _distance_bounds(x, y, index)
    return err is not None and d + err < bound


def _certified_far(x, y, index, bound) -> bool:
    d, err = _distance_bounds(x, y, index)
    return err is not None and d - err > bound


def converges_positively(seq: Sequence[CReal], limit: CReal, p: int, depth: int) -> Verdict:
    """Locate ``n`` with every listed ``r_m`` (``m >= n``) within ``2**-p`` of ``limit``.

    Distances are certified from approximants at index ``depth - 1``.  When no
    such ``n`` exists the verdict is Unknown; a prefix whose late terms are
    certified far apart from each other is additionally flagged ``NonCauchy``.
    """
    if not seq or depth <= 0:
        return Verdict.unknown(0)
    idx = depth - 1
    bound = dyadic(p)
    close = [_certified_close(limit, r, idx, bound) for r in seq]
    n = len(seq)
    while n > 0 and close[n - 1]:
        n -= 1
    if n < len(seq):
        return Verdict.established(Certificate("positive convergence", {"n": n, "p": p}), depth)
    notes = []
    half = seq[len(seq) // 2:]
    if any(_certified_far(a, b, idx, bound) for a, b in itertools.combinations(half, 2)):
        notes.append("NonCauchy")
    return Verdict.unknown(depth, notes)


def negative_convergence_check(seq: Sequence[CReal], limit: CReal, p: int, depth: int) -> Verdict:
    """Bulk-witness surrogate for failure of negative convergence.

    Among the first ``depth`` terms, if at least ``ceil(depth/2)`` are certified
    farther than ``2**-p`` from ``limit``, they form a Refuted certificate (a
    subsequence kept away from the limit).  Otherwise Unknown.
    """
    terms = list(seq[:depth])
    if not terms or depth <= 0:
        return Verdict.unknown(0)
    idx = depth - 1
    bound = dyadic(p)
    bad = [m for m, r in enumerate(terms) if _certified_far(limit, r, idx, bound)]
    if len(bad) >= -(-depth // 2):
        return Verdict.refuted(Certificate("bounded-away subsequence", {"indices": tuple(bad), "p": p}), depth)
    return Verdict.unknown(depth)
