"""Evidence-driven sequences generated from a :class:`~cslab.subject.SubjectTrace`.

Index convention: approximant ``i`` (0-based) is the choice made at stage
``i + 1``, so it may use everything known by stage ``i + 1``.  An event at
stage ``m`` therefore first shows at index ``m - 1``.  Knowledge held at stage
0 (before any choice) acts like an event at stage 1.

Every sequence here is schedule-driven: before its triggering event it can
only be read up to the trace horizon, after it the tail is fixed and readable
at any index.  Moduli combine a generic bound (sound whatever happens later)
with the exact freeze point when the trigger is already on the trace.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Mapping, Sequence

from .creal import CReal, Lawlike, ScheduleDriven, apart, constant
from .errors import HorizonExhausted, MultipleAlignments, WingMismatch
from .numeric import dyadic
from .subject import Judgment, Kind, SubjectTrace, build_trace
from .verdict import Verdict


def _trigger(trace: SubjectTrace, atom: str, kinds) -> tuple[int, Kind] | None:
    """Earliest ``(stage, kind)`` among the given kinds for ``atom``, or None."""
    hits = []
    for kind in kinds:
        s = trace.schedule.stage_of(Judgment(atom, kind))
        if s is not None:
            hits.append((s, list(Kind).index(kind), kind))
    if not hits:
        return None
    s, _, kind = min(hits)
    return max(s, 1), kind


def _staged(trace: SubjectTrace, name: str, trigger: int | None,
            before: Callable[[int], Fraction], after: Callable[[int], Fraction],
            generic_modulus: Callable[[int], int], after_modulus: Callable[[int], int]) -> CReal:
    horizon = trace.horizon
    freeze = None if trigger is None else trigger - 1

    def approximant(i):
        if freeze is not None and i >= freeze:
            return after(i)
        if i + 1 > horizon:
            raise HorizonExhausted(i, horizon)
        return before(i)

    def modulus(p):
        g = generic_modulus(p)
        if freeze is None:
            return g
        return min(g, max(freeze, after_modulus(p)))

    return CReal(approximant, modulus, ScheduleDriven(name, trace), name)


def _zero_modulus(p):
    return 0


# -- the 1948 sequence and its positive variant -----------------------------------

def brouwer1948_r(trace: SubjectTrace, atom: str) -> CReal:
    """0 while ``atom`` is undecided; ``2**-m`` after Affirm at ``m``, ``-2**-m`` after Refute.

    DoubleNeg events are ignored.  While the value is 0 at index ``i`` every
    later value lies in ``[-2**-(i+2), 2**-(i+2)]``.
    """
    hit = _trigger(trace, atom, (Kind.AFFIRM, Kind.REFUTE))
    stage, kind = hit if hit else (None, None)
    sign = -1 if kind is Kind.REFUTE else 1
    tail = sign * dyadic(stage) if stage else Fraction(0)
    return _staged(trace, "brouwer1948_r", stage, lambda i: Fraction(0), lambda i: tail,
                   lambda p: max(p - 2, 0), _zero_modulus)


def brouwer1948_positive(trace: SubjectTrace, atom: str) -> CReal:
    """As :func:`brouwer1948_r`, but a Refute also yields ``+2**-m``."""
    hit = _trigger(trace, atom, (Kind.AFFIRM, Kind.REFUTE))
    stage = hit[0] if hit else None
    tail = dyadic(stage) if stage else Fraction(0)
    return _staged(trace, "brouwer1948_positive", stage, lambda i: Fraction(0), lambda i: tail,
                   lambda p: max(p - 2, 0), _zero_modulus)


# -- Heyting's refinement ------------------------------------------------------------

def heyting_pair(trace: SubjectTrace, atom: str) -> tuple[CReal, CReal]:
    """The pair ``(r, s)`` driven by the first test (Refute or DoubleNeg) of ``atom``.

    Both follow ``2**-n`` (``n = i + 1``) until the test at stage ``m``.  Then
    ``r`` freezes at ``2**-m``; ``s`` freezes at ``2**-m`` for even ``m`` and
    keeps following ``2**-n`` for odd ``m``.
    """
    hit = _trigger(trace, atom, (Kind.REFUTE, Kind.DOUBLENEG))
    m = hit[0] if hit else None

    def halving(i):
        return dyadic(i + 1)

    def shrinking(p):
        return max(p - 1, 0)

    r = _staged(trace, "heyting_r", m, halving, lambda i: dyadic(m), shrinking, _zero_modulus)
    if m is not None and m % 2 == 1:
        s = _staged(trace, "heyting_s", m, halving, halving, shrinking, shrinking)
    else:
        s = _staged(trace, "heyting_s", m, halving, lambda i: dyadic(m), shrinking, _zero_modulus)
    return r, s


# -- drifts and checking numbers -------------------------------------------------------

@dataclass
class Drift:
    """A kernel with counting numbers converging to it.

    ``counting(n)`` is the ``n``-th counting number (``n >= 1``).  A two-winged
    drift also has ``left(n)`` and ``right(n)``.  ``modulus(q)`` is an index
    ``N`` such that kernel approximants from ``N`` on, counting numbers
    ``c_m`` with ``m > N``, and every counting number's approximants from
    ``N`` on are all within ``2**-q`` of their respective limits / the kernel.
    """

    kernel: CReal
    counting: Callable[[int], CReal]
    modulus: Callable[[int], int]
    left: Callable[[int], CReal] | None = None
    right: Callable[[int], CReal] | None = None
    label: str = "drift"

    @property
    def two_winged(self) -> bool:
        return self.left is not None and self.right is not None

    def check_apartness(self, upto: int, depth: int = 64) -> list[int]:
        """Counting indices ``n <= upto`` lacking an Established apartness from the kernel."""
        bad = []
        for n in range(1, upto + 1):
            numbers = [self.counting(n)]
            if self.two_winged:
                numbers = [self.left(n), self.right(n)]
            if not all(apart(self.kernel, c, depth).is_established for c in numbers):
                bad.append(n)
        return bad


def standard_drift() -> Drift:
    """Kernel 0 with counting numbers ``2**-n``."""
    return Drift(constant(0), lambda n: constant(dyadic(n)), lambda q: max(q - 1, 0), label="2^-n drift")


def standard_two_winged() -> Drift:
    """Kernel 0, left wing ``-2**-n``, right wing ``2**-n``."""
    return Drift(constant(0), lambda n: constant(dyadic(n)), lambda q: max(q - 1, 0),
                 left=lambda n: constant(-dyadic(n)), right=lambda n: constant(dyadic(n)),
                 label="two-winged 2^-n drift")


def sqrt2_convergent(n: int) -> Fraction:
    """``n``-th continued-fraction convergent of the square root of 2 (1, 3/2, 7/5, ...)."""
    p0, q0, p1, q1 = 1, 1, 3, 2
    if n == 0:
        return Fraction(p0, q0)
    for _ in range(n - 1):
        p0, q0, p1, q1 = p1, q1, 2 * p1 + p0, 2 * q1 + q0
    return Fraction(p1, q1)


def sqrt2() -> CReal:
    # |conv(n) - sqrt2| < 1/(q_n q_{n+1}) <= 2^-(2n+1)
    return CReal(sqrt2_convergent, lambda p: (p + 1) // 2, Lawlike("sqrt2 convergents"), "sqrt2")


def sqrt2_drift() -> Drift:
    """Irrational kernel (square root of 2) with rational counting numbers: its convergents."""
    return Drift(sqrt2(), lambda n: constant(sqrt2_convergent(n)), lambda q: (q + 1) // 2,
                 label="sqrt2 drift")


def _checking(trace, atom, drift: Drift, kinds, pick, name) -> CReal:
    hit = _trigger(trace, atom, kinds)
    if hit is None:
        return _staged(trace, name, None, drift.kernel.approximant, None,
                       lambda p: drift.modulus(p + 2), None)
    m, kind = hit
    target = pick(m, kind)
    return _staged(trace, name, m, drift.kernel.approximant, target.approximant,
                   lambda p: drift.modulus(p + 2), target.modulus)


def direct_checking(drift: Drift, trace: SubjectTrace, atom: str) -> CReal:
    """Kernel approximants until ``atom`` or its negation is evident at stage ``m``, then ``c_m``."""
    return _checking(trace, atom, drift, (Kind.AFFIRM, Kind.REFUTE),
                     lambda m, kind: drift.counting(m), "direct_checking")


def conditional_checking(drift: Drift, trace: SubjectTrace, atom: str) -> CReal:
    """Like :func:`direct_checking` but only an Affirm event triggers the switch."""
    return _checking(trace, atom, drift, (Kind.AFFIRM,),
                     lambda m, kind: drift.counting(m), "conditional_checking")


def two_sided_checking(drift: Drift, trace: SubjectTrace, atom: str) -> CReal:
    """Affirm at ``m`` switches to the right wing ``d_m``, Refute to the left wing ``l_m``."""
    if not drift.two_winged:
        raise WingMismatch(f"{drift.label} is not two-winged")
    return _checking(trace, atom, drift, (Kind.AFFIRM, Kind.REFUTE),
                     lambda m, kind: drift.right(m) if kind is Kind.AFFIRM else drift.left(m),
                     "two_sided_checking")


# -- the 1924 sequence ---------------------------------------------------------------

@dataclass
class FleeingProperty:
    """A decidable property of naturals with no known instance.

    ``declared_critical`` is the scenario's hidden first instance; it is only
    used to check consistency, never by the constructions.
    """

    predicate: Callable[[int], bool]
    declared_critical: int | None = None
    label: str = "fleeing property"

    def __post_init__(self):
        k = self.declared_critical
        if k is not None:
            if any(self.predicate(i) for i in range(k)) or not self.predicate(k):
                raise ValueError(f"predicate does not have critical number {k}")

    @classmethod
    def with_critical(cls, k: int | None) -> "FleeingProperty":
        if k is None:
            return cls(lambda i: False, None, "never within reach")
        return cls(lambda i: i >= k, k, f"first instance {k}")

    @classmethod
    def from_table(cls, table: Sequence[bool]) -> "FleeingProperty":
        table = list(table)
        return cls(lambda i: bool(table[i]) if i < len(table) else False, None, "table")


def fleeing_sequence_1924(fp: FleeingProperty, horizon: int) -> CReal:
    """``c_v = (-1/2)**v`` until the first instance ``k`` of ``fp``, then ``(-1/2)**k``.

    The predicate is scanned only up to ``horizon``.  (For the original
    property on the decimal digits of pi the first instance turned out to be
    17,387,594,880; any fleeing property will do here.)
    """
    half = Fraction(-1, 2)
    k1 = next((k for k in range(horizon + 1) if fp.predicate(k)), None)

    def approximant(v):
        if k1 is not None and v >= k1:
            return half ** k1
        if v > horizon:
            raise HorizonExhausted(v, horizon)
        return half ** v

    def modulus(p):
        return p + 1 if k1 is None else min(p + 1, k1)

    return CReal(approximant, modulus, Lawlike(f"1924 sequence ({fp.label})"), "fleeing_1924")


# -- negative continuity: the aligned sequence -------------------------------------------

STAY = "base"


def negcont_r_omega(base: CReal, family, decisions: Sequence[tuple[int, object]]) -> CReal:
    """Copy ``base`` until a free alignment decision, then copy the chosen sequence.

    ``decisions`` holds at most one ``(stage, target)``; ``target`` is a key of
    ``family`` or :data:`STAY` (align with ``base``).  A decision made at stage
    ``s`` governs indices ``i >= s``.
    """
    decisions = list(decisions)
    if len(decisions) > 1:
        raise MultipleAlignments(f"{len(decisions)} alignment decisions; at most one allowed")
    if not decisions or decisions[0][1] in (STAY, None):
        return CReal(base.approximant, base.modulus, Lawlike("r_omega (aligned with r_0)"), "r_omega")
    stage, key = decisions[0]
    target = family[key]

    def approximant(i):
        return target.approximant(i) if i >= stage else base.approximant(i)

    return CReal(approximant, lambda p: max(stage, target.modulus(p)),
                 Lawlike(f"r_omega (aligned with r_{key} at stage {stage})"), "r_omega")


# -- registry used by scenarios and the REPL ---------------------------------------------

def drift_for(params: Mapping) -> Drift:
    name = params.get("drift", "standard")
    if name == "standard":
        return standard_drift()
    if name == "two_winged":
        return standard_two_winged()
    if name == "sqrt2":
        return sqrt2_drift()
    raise ValueError(f"unknown drift {name!r}")


SCHEDULE_CONSTRUCTIONS: dict[str, Callable[[SubjectTrace, str, Mapping], CReal]] = {
    "r1948": lambda t, a, p: brouwer1948_r(t, a),
    "r1948_positive": lambda t, a, p: brouwer1948_positive(t, a),
    "heyting_r": lambda t, a, p: heyting_pair(t, a)[0],
    "heyting_s": lambda t, a, p: heyting_pair(t, a)[1],
    "direct": lambda t, a, p: direct_checking(drift_for(p), t, a),
    "conditional": lambda t, a, p: conditional_checking(drift_for(p), t, a),
    "two_sided": lambda t, a, p: two_sided_checking(drift_for({"drift": "two_winged", **p}), t, a),
}


def build_schedule_real(name: str, trace: SubjectTrace, atom: str, params: Mapping | None = None) -> CReal:
    try:
        make = SCHEDULE_CONSTRUCTIONS[name]
    except KeyError:
        raise ValueError(f"unknown construction {name!r}; known: {sorted(SCHEDULE_CONSTRUCTIONS)}") from None
    return make(trace, atom, params or {})


def format_prefix(values: Sequence[Fraction], more: bool = True) -> str:
    body = ",".join(str(v) for v in values)
    return f"({body},...)" if more else f"({body})"


def prefix_for_session(session, name: str, atom: str) -> tuple[Fraction, ...]:
    trace = session.trace()
    return build_schedule_real(name, trace, atom).available_prefix(trace.horizon)


def verdict_for_session(session, relation: str, left: str, right: str, atom: str = "A") -> Verdict:
    """Evaluate ``apart``/``less`` between two operands named in the REPL.

    Operands are rational literals or construction names over ``atom``.
    """
    from .creal import measurably_less

    trace = session.trace()

    def operand(tok):
        try:
            return constant(Fraction(tok))
        except ValueError:
            return build_schedule_real(tok, trace, atom)

    x, y = operand(left), operand(right)
    depth = trace.horizon
    if relation == "apart":
        return apart(x, y, depth)
    if relation in ("less", "measurably_less"):
        return measurably_less(x, y, depth)
    raise ValueError(f"unknown relation {relation!r}")


def trace_of(horizon: int, *events) -> SubjectTrace:
    from .subject import schedule

    return build_trace(schedule(horizon, *events))
