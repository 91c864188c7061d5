"""Binary witness sequences read off a subject trace.

``alpha_from_trace`` is the basic witness: ``alpha(i)`` is 1 exactly when the
target judgment is evident by stage ``i + 1``.  The rest of the module
transforms such witnesses (at-most-one-1, zigzag merging of a family),
builds enumerations of finite species from membership evidence, and checks
the schema clauses at a finite horizon.

Clause 2 quantifies over all stages; here it is read as "no event within the
horizon", which is never evidence that the judgment fails.
"""

from __future__ import annotations

import zlib
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Mapping, Sequence

from .constructions import Drift, conditional_checking, sqrt2_drift
from .errors import HorizonExhausted, NotDeduped, NotNormalized, RepeatingKernel, UninhabitedFixture
from .numeric import pair, unpair
from .subject import Judgment, Kind, SubjectTrace, box
from .verdict import Certificate, Verdict


@dataclass(frozen=True)
class BinarySeq:
    values: tuple[int, ...]
    provenance: str = field(default="", compare=False)
    #: indices whose value was defaulted rather than computed
    flagged: tuple[int, ...] = field(default=(), compare=False)

    def __post_init__(self):
        bad = [i for i, v in enumerate(self.values) if v not in (0, 1)]
        if bad:
            raise ValueError(f"non-binary values at indices {bad}")

    def __len__(self):
        return len(self.values)

    def __getitem__(self, i):
        return self.values[i]

    def __iter__(self):
        return iter(self.values)

    @property
    def ones(self) -> tuple[int, ...]:
        return tuple(i for i, v in enumerate(self.values) if v)

    def first_one(self) -> int | None:
        return next((i for i, v in enumerate(self.values) if v), None)


def alpha_from_trace(trace: SubjectTrace, target: Judgment) -> BinarySeq:
    """``alpha(i) = 1`` iff ``target`` is evident by stage ``i + 1``; length ``H``."""
    vals = tuple(int(box(trace, i + 1, target)) for i in range(trace.horizon))
    return BinarySeq(vals, f"alpha[{target}]")


def dedup(alpha: BinarySeq) -> BinarySeq:
    """Keep only the first 1."""
    first = alpha.first_one()
    vals = tuple(int(i == first) for i in range(len(alpha)))
    return BinarySeq(vals, f"dedup({alpha.provenance})", alpha.flagged)


def zigzag_merge(family: Sequence[BinarySeq], length: int) -> BinarySeq:
    """``beta(pair(x, k)) = family[x][k]`` for ``p < length``.

    Indices whose ``x`` lies outside the family, or whose ``k`` lies past the
    end of ``family[x]``, get value 0 and are listed in ``flagged``.
    """
    vals, flagged = [], []
    for p in range(length):
        x, k = unpair(p)
        if x < len(family) and k < len(family[x]):
            vals.append(family[x][k])
        else:
            vals.append(0)
            flagged.append(p)
    return BinarySeq(tuple(vals), f"zigzag of {len(family)}", tuple(flagged))


# -- enumerating a species from membership evidence ----------------------------------

def member_atom(n: int, species: str = "X") -> str:
    return f"{species}_{n}"


def _membership(trace: SubjectTrace, species: str) -> dict[int, int]:
    """Member -> stage of its Affirm event."""
    prefix = species + "_"
    out = {}
    for e in trace.schedule.events:
        j = e.judgment
        if j.kind is Kind.AFFIRM and j.atom.startswith(prefix) and j.atom[len(prefix):].isdigit():
            out[int(j.atom[len(prefix):])] = e.stage
    return out


class Enumeration:
    """``f(pair(n, k))`` is ``n`` once ``n`` is known to be a member at stage ``k``, else the inhabitant.

    Stages beyond the horizon are answered only for members already found
    (evidence persists); otherwise :class:`HorizonExhausted` is raised.
    """

    def __init__(self, trace: SubjectTrace, species: str, inhabitant: int):
        self.trace = trace
        self.species = species
        self.inhabitant = inhabitant
        self.members = _membership(trace, species)

    def known(self, n: int, k: int) -> bool:
        if k > self.trace.horizon:
            if n in self.members:
                return True
            raise HorizonExhausted(k, self.trace.horizon)
        return box(self.trace, k, Judgment.affirm(member_atom(n, self.species)))

    def __call__(self, p: int) -> int:
        n, k = unpair(p)
        return n if self.known(n, k) else self.inhabitant

    def enumerates(self, n: int, upto: int | None = None) -> bool:
        """Whether some ``k <= upto`` (default: the horizon) has ``f(pair(n, k)) = n``."""
        upto = self.trace.horizon if upto is None else upto
        return any(self(pair(n, k)) == n for k in range(upto + 1))

    def range_upto(self, limit: int) -> set[int]:
        """Values of ``f`` on codes ``p < limit`` whose stage is within the horizon."""
        out = set()
        for p in range(limit):
            if unpair(p)[1] <= self.trace.horizon:
                out.add(self(p))
        return out


def species_enumerator(trace: SubjectTrace, inhabitant: int | None = None, species: str = "X") -> Enumeration:
    """Enumeration of the members of ``species`` with evidence on the trace.

    ``inhabitant`` defaults to the member whose evidence comes first.
    """
    members = _membership(trace, species)
    if not members:
        raise UninhabitedFixture(f"no membership evidence for {species}")
    if inhabitant is None:
        inhabitant = min(members, key=lambda n: (members[n], n))
    elif inhabitant not in members:
        raise UninhabitedFixture(f"{inhabitant} is not known to be in {species}")
    return Enumeration(trace, species, inhabitant)


def cs_enumerate(trace: SubjectTrace, species: str = "X") -> Enumeration:
    """The normalised enumeration: 0 must be known to be a member at stage 0, and ``f(0) = 0``."""
    members = _membership(trace, species)
    if not members:
        raise UninhabitedFixture(f"no membership evidence for {species}")
    if members.get(0) != 0:
        raise NotNormalized(f"0 in {species} is not known at stage 0")
    return Enumeration(trace, species, 0)


def fixture_schedule(members: Mapping[int, int], horizon: int, species: str = "X") -> dict:
    """Schedule description with one membership Affirm per ``member -> stage``."""
    events = [{"stage": s, "atom": member_atom(n, species), "kind": "affirm"} for n, s in sorted(members.items())]
    return {"horizon": horizon, "events": events}


# -- variants -------------------------------------------------------------------------

def wednesday_check(alpha: BinarySeq, t: Callable[[int], int], trace: SubjectTrace, target: Judgment,
                    assert_never: bool = False) -> Verdict:
    """Finite-horizon reading of the clause about positions in the range of ``t``.

    ``t`` is sampled on ``0..len(alpha)``.  Established(ClauseSatisfied) when
    the single 1 avoids the range of ``t`` and the target is decided;
    Refuted(Violation) when a 1 sits on a ``t``-position although the scenario
    asserts it never will; Unknown when nothing happened within the horizon.
    """
    ones = alpha.ones
    if len(ones) > 1:
        raise NotDeduped(f"{len(ones)} ones in {alpha.provenance}")
    horizon = len(alpha)
    positions = {t(x) for x in range(horizon + 1)}
    decided = box(trace, trace.horizon, target)
    if not ones:
        if decided:
            return Verdict.refuted(Certificate("MissedEvent", {"target": str(target)}), horizon)
        return Verdict.unknown(horizon, ("Vacuous",))
    n = ones[0]
    data = {"position": n, "on_t_position": n in positions}
    if not decided:
        return Verdict.refuted(Certificate("Spurious", data), horizon)
    if n in positions and assert_never:
        return Verdict.refuted(Certificate("Violation", data), horizon)
    return Verdict.established(Certificate("ClauseSatisfied", data), horizon)


_MASK = (1 << 64) - 1


def splitmix64(state: int) -> tuple[int, int]:
    """One step of splitmix64: ``(next_state, output)``."""
    state = (state + 0x9E3779B97F4A7C15) & _MASK
    z = state
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK
    return state, z ^ (z >> 31)


def random_choice(seed: int, atom: str) -> int:
    """The positive number chosen for ``atom``; reproducible from ``seed``."""
    _, z = splitmix64((seed ^ zlib.crc32(atom.encode())) & _MASK)
    return 1 + z % (1 << 32)


def random_witness(trace: SubjectTrace, atom: str, seed: int) -> tuple[int, ...]:
    """0 until ``atom`` is affirmed at stage ``m``, then one random ``k > 0`` from index ``m - 1`` on."""
    m = trace.schedule.stage_of(Judgment.affirm(atom))
    if m is None:
        return (0,) * trace.horizon
    k = random_choice(seed, atom)
    start = max(m, 1) - 1
    return tuple(k if i >= start else 0 for i in range(trace.horizon))


# -- the strong schema from a conditional checking number ------------------------------

def bks_plus_from_conditional(prefix: Sequence[Fraction]) -> BinarySeq:
    """``alpha(n) = 1`` iff ``C(k) = C(k+1)`` for some ``k <= n``; length ``len(prefix) - 1``.

    A repeat that is not followed by constancy means the pre-event stream
    repeats, which the construction cannot tolerate.
    """
    prefix = list(prefix)
    n = len(prefix) - 1
    first = next((k for k in range(n) if prefix[k] == prefix[k + 1]), None)
    if first is not None and any(prefix[j] != prefix[first] for j in range(first, len(prefix))):
        raise RepeatingKernel(f"values repeat at index {first} and change again afterwards")
    vals = tuple(int(first is not None and k >= first) for k in range(max(n, 0)))
    return BinarySeq(vals, "bks+ from conditional checking")


def conditional_prefix(trace: SubjectTrace, atom: str, drift: Drift | None = None) -> tuple[Fraction, ...]:
    """Readable approximants of the conditional checking number.

    That is ``H`` approximants, plus the one at index ``H`` once the tail is
    frozen.  Raises :class:`RepeatingKernel` for a kernel whose approximants
    repeat consecutively within that range.
    """
    drift = sqrt2_drift() if drift is None else drift
    h = trace.horizon
    ks = [drift.kernel.approximant(i) for i in range(h + 1)]
    rep = next((i for i in range(h) if ks[i] == ks[i + 1]), None)
    if rep is not None:
        raise RepeatingKernel(f"kernel approximants {rep} and {rep + 1} coincide ({ks[rep]})")
    return conditional_checking(drift, trace, atom).available_prefix(h + 1)


# -- clause verification ----------------------------------------------------------------

@dataclass(frozen=True)
class ClauseReport:
    clause1: bool
    clause2_forward: bool
    clause2_backward: bool
    clause3: bool
    plus: bool | None = None
    notes: tuple[str, ...] = ()

    @property
    def passed(self) -> bool:
        return all((self.clause1, self.clause2_forward, self.clause2_backward, self.clause3,
                    self.plus is not False))

    def outcomes(self) -> tuple:
        return (self.clause1, self.clause2_forward, self.clause2_backward, self.clause3, self.plus)


def verify_bks_clauses(alpha: BinarySeq, trace: SubjectTrace, target: Judgment,
                       horizon: int | None = None, plus: bool = False) -> ClauseReport:
    """Check the schema clauses for ``alpha`` against ``trace`` up to ``horizon``.

    clause1: binary values.  clause2: all zeros up to the horizon iff no
    event within it (both directions reported).  clause3: a 1 at ``n`` needs
    the event by stage ``n + 1``.  ``plus`` adds the converse of clause3:
    an event by stage ``n + 1`` forces a 1 at some index ``<= n``.
    """
    h = trace.horizon if horizon is None else min(horizon, trace.horizon)
    vals = alpha.values[:h]
    clause1 = all(v in (0, 1) for v in vals)
    event = box(trace, h, target)
    all_zero = not any(vals)
    clause2_forward = (not all_zero) or (not event)
    clause2_backward = event or all_zero
    clause3 = all(box(trace, min(n + 1, h), target) for n, v in enumerate(vals) if v)
    plus_ok = None
    if plus:
        plus_ok = all(any(vals[: n + 1]) for n in range(len(vals)) if box(trace, n + 1, target))
    notes = ("clause2 is horizon-relative: no event within the horizon is not a refutation",)
    return ClauseReport(clause1, clause2_forward, clause2_backward, clause3, plus_ok, notes)
