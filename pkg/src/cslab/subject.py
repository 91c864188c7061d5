"""The Creating Subject at desk scale.

An :class:`EvidenceSchedule` lists, for a finite horizon ``H``, the stage at
which each judgment becomes evident.  :func:`build_trace` turns it into the
cumulative knowledge per stage, and :func:`box` is the stage predicate: it is
a table lookup, so it is always decidable.

Stage 0 is reserved for knowledge held before the first choice is made
(used by the enumeration normalisation, where membership of the inhabitant is
assumed at stage 0).  Ordinary schedules put events in ``1..H``.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Iterable, Mapping

from .errors import ScheduleError, StageBeyondHorizon
from .verdict import Certificate, Verdict


class Kind(enum.Enum):
    AFFIRM = "affirm"
    REFUTE = "refute"
    DOUBLENEG = "doubleneg"

    @classmethod
    def parse(cls, text: str) -> "Kind":
        try:
            return cls(text.strip().lower())
        except ValueError:
            raise ValueError(f"unknown judgment kind {text!r}") from None


_PREFIX = {Kind.AFFIRM: "", Kind.REFUTE: "~", Kind.DOUBLENEG: "~~"}


@dataclass(frozen=True)
class Judgment:
    atom: str
    kind: Kind = Kind.AFFIRM

    def __str__(self):
        return _PREFIX[self.kind] + self.atom

    def sort_key(self):
        return (self.atom, list(Kind).index(self.kind))

    @classmethod
    def affirm(cls, atom):
        return cls(atom, Kind.AFFIRM)

    @classmethod
    def refute(cls, atom):
        return cls(atom, Kind.REFUTE)

    @classmethod
    def doubleneg(cls, atom):
        return cls(atom, Kind.DOUBLENEG)


@dataclass(frozen=True)
class Event:
    stage: int
    judgment: Judgment


@dataclass(frozen=True)
class Violation:
    code: str
    detail: str

    def __str__(self):
        return f"{self.code}: {self.detail}"


@dataclass(frozen=True)
class EvidenceSchedule:
    horizon: int
    events: tuple[Event, ...] = ()

    def stage_of(self, judgment: Judgment) -> int | None:
        for e in self.events:
            if e.judgment == judgment:
                return e.stage
        return None

    @property
    def atoms(self) -> tuple[str, ...]:
        return tuple(sorted({e.judgment.atom for e in self.events}))

    def to_dict(self) -> dict:
        return {
            "horizon": self.horizon,
            "events": [
                {"stage": e.stage, "atom": e.judgment.atom, "kind": e.judgment.kind.value}
                for e in self.events
            ],
        }


def _coerce_event(raw) -> Event:
    if isinstance(raw, Event):
        return raw
    if isinstance(raw, Mapping):
        kind = raw.get("kind", "affirm")
        kind = kind if isinstance(kind, Kind) else Kind.parse(kind)
        return Event(int(raw["stage"]), Judgment(str(raw["atom"]), kind))
    stage, judgment = raw
    if not isinstance(judgment, Judgment):
        raise TypeError(f"cannot read event {raw!r}")
    return Event(int(stage), judgment)


def find_violations(horizon: int, events: Iterable[Event]) -> list[Violation]:
    events = list(events)
    out = []
    if horizon < 1:
        out.append(Violation("StageOutOfRange", f"horizon {horizon} must be >= 1"))
    seen = {}
    for e in events:
        if not 0 <= e.stage <= horizon:
            out.append(Violation("StageOutOfRange", f"{e.judgment} at stage {e.stage} outside 0..{horizon}"))
        if e.judgment in seen:
            out.append(Violation("DuplicateEvent", f"{e.judgment} scheduled twice"))
        seen.setdefault(e.judgment, e.stage)
    kinds_by_atom: dict[str, set[Kind]] = {}
    for j in seen:
        kinds_by_atom.setdefault(j.atom, set()).add(j.kind)
    for atom, kinds in sorted(kinds_by_atom.items()):
        if {Kind.AFFIRM, Kind.REFUTE} <= kinds:
            out.append(Violation("ContradictoryEvidence", f"{atom} both affirmed and refuted"))
        if {Kind.REFUTE, Kind.DOUBLENEG} <= kinds:
            out.append(Violation("ContradictoryEvidence", f"{atom} both refuted and doubly negated"))
    return out


def validate_schedule(raw) -> EvidenceSchedule:
    """Canonicalise a schedule description or raise :class:`ScheduleError`.

    ``raw`` is an :class:`EvidenceSchedule`, or a mapping with ``horizon`` and
    ``events`` (each a mapping ``{stage, atom, kind}`` or a ``(stage, Judgment)``
    pair).  The error carries every violation found.
    """
    if isinstance(raw, EvidenceSchedule):
        horizon, events = raw.horizon, list(raw.events)
    else:
        try:
            horizon = int(raw["horizon"])
            events = [_coerce_event(e) for e in raw.get("events", ())]
        except (KeyError, TypeError, ValueError) as exc:
            raise ScheduleError([Violation("Malformed", str(exc))]) from None
    problems = find_violations(horizon, events)
    if problems:
        raise ScheduleError(problems)
    events.sort(key=lambda e: (e.stage, e.judgment.sort_key()))
    return EvidenceSchedule(horizon, tuple(events))


def schedule(horizon: int, *events) -> EvidenceSchedule:
    """Shorthand: ``schedule(8, (3, Judgment.affirm("A")))``."""
    return validate_schedule({"horizon": horizon, "events": list(events)})


@dataclass(frozen=True)
class SubjectTrace:
    schedule: EvidenceSchedule
    knowledge: tuple[frozenset, ...] = field(repr=False)

    @property
    def horizon(self) -> int:
        return self.schedule.horizon

    def first_stage(self, judgments: Iterable[Judgment]) -> int | None:
        """Earliest stage at which any of ``judgments`` is known, if within horizon."""
        stages = [self.schedule.stage_of(j) for j in judgments]
        stages = [s for s in stages if s is not None]
        return min(stages) if stages else None


def build_trace(sched: EvidenceSchedule) -> SubjectTrace:
    know = []
    acc = set()
    by_stage: dict[int, list[Judgment]] = {}
    for e in sched.events:
        by_stage.setdefault(e.stage, []).append(e.judgment)
    for n in range(sched.horizon + 1):
        acc.update(by_stage.get(n, ()))
        know.append(frozenset(acc))
    return SubjectTrace(sched, tuple(know))


def _check_stage(trace: SubjectTrace, n: int):
    if n < 0 or n > trace.horizon:
        raise StageBeyondHorizon(f"stage {n} outside 0..{trace.horizon}")


def box(trace: SubjectTrace, n: int, j: Judgment) -> bool:
    """Whether ``j`` has been made evident by stage ``n``."""
    _check_stage(trace, n)
    return j in trace.knowledge[n]


def tested_by(trace: SubjectTrace, n: int, atom: str) -> bool:
    """Testability: ``~A`` decided, i.e. a Refute or DoubleNeg event by stage ``n``."""
    _check_stage(trace, n)
    k = trace.knowledge[n]
    return Judgment.refute(atom) in k or Judgment.doubleneg(atom) in k


def decided_by(trace: SubjectTrace, n: int, atom: str) -> bool:
    """``A or ~A`` made evident by stage ``n``."""
    _check_stage(trace, n)
    k = trace.knowledge[n]
    return Judgment.affirm(atom) in k or Judgment.refute(atom) in k


# -- interactive stepping ---------------------------------------------------

class Session:
    """A schedule under construction, advanced one stage at a time.

    ``inject`` records its judgment at the next stage and makes that stage
    current.  Rejected injections leave the session untouched.
    """

    def __init__(self, max_horizon: int = 64):
        self.max_horizon = max_horizon
        self.stage = 0
        self.events: list[Event] = []

    def snapshot(self) -> EvidenceSchedule:
        return validate_schedule({"horizon": max(self.stage, 1), "events": list(self.events)})

    def trace(self) -> SubjectTrace:
        return build_trace(self.snapshot())

    def advance(self, steps: int = 1) -> str:
        if self.stage + steps > self.max_horizon:
            raise ScheduleError([Violation("StageOutOfRange", f"session limit {self.max_horizon}")])
        self.stage += steps
        return f"stage {self.stage}"

    def inject(self, judgment: Judgment) -> str:
        target = self.stage + 1
        candidate = self.events + [Event(target, judgment)]
        problems = find_violations(max(target, 1), candidate)
        if problems:
            raise ScheduleError(problems)
        self.events = candidate
        self.stage = target
        return f"stage {self.stage}: {judgment} evident"

    def query_box(self, n: int, judgment: Judgment) -> Verdict:
        if n > self.stage:
            return Verdict.unknown(self.stage, ("stage not yet reached",))
        hit = box(self.trace(), n, judgment)
        cert = Certificate("box", {"stage": n, "judgment": str(judgment)})
        return Verdict.established(cert, self.stage) if hit else Verdict.refuted(cert, self.stage)

    def query_tested(self, n: int, atom: str) -> Verdict:
        if n > self.stage:
            return Verdict.unknown(self.stage, ("stage not yet reached",))
        hit = tested_by(self.trace(), n, atom)
        cert = Certificate("tested", {"stage": n, "atom": atom})
        return Verdict.established(cert, self.stage) if hit else Verdict.refuted(cert, self.stage)


@dataclass(frozen=True)
class SessionReport:
    ok: bool
    message: str
    result: object = None


def step_session(session: Session, command: str, *args) -> tuple[Session, SessionReport]:
    """Apply one command (``advance``, ``inject``, ``query``) to ``session``.

    ``query`` takes ``("box", n, judgment)``, ``("tested", n, atom)`` or
    ``("prefix", construction_name, atom)``.
    """
    try:
        if command == "advance":
            return session, SessionReport(True, session.advance(*args))
        if command == "inject":
            return session, SessionReport(True, session.inject(*args))
        if command == "query":
            what, *rest = args
            if what == "box":
                v = session.query_box(*rest)
            elif what == "tested":
                v = session.query_tested(*rest)
            elif what == "prefix":
                from .constructions import prefix_for_session

                name, atom = rest
                pre = prefix_for_session(session, name, atom)
                return session, SessionReport(True, f"{name}: {pre}", pre)
            else:
                raise ValueError(f"unknown query {what!r}")
            return session, SessionReport(True, str(v), v)
    except ScheduleError as exc:
        return session, SessionReport(False, f"rejected: {exc}")
    raise ValueError(f"unknown command {command!r}")
