"""Desk-scale experiments with the Creating Subject: evidence schedules,
schedule-driven reals, binary witnesses and stage logic."""

from .creal import CReal, apart, constant, measurably_less
from .numeric import pair, unpair
from .subject import EvidenceSchedule, Judgment, Kind, SubjectTrace, box, build_trace, schedule, validate_schedule
from .verdict import Status, Verdict

__version__ = "0.1.0"

__all__ = [
    "CReal", "apart", "constant", "measurably_less", "pair", "unpair",
    "EvidenceSchedule", "Judgment", "Kind", "SubjectTrace", "box", "build_trace", "schedule",
    "validate_schedule", "Status", "Verdict",
]
