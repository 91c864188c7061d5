import pytest
from hypothesis import given, strategies as st

from cslab.errors import ScheduleError, StageBeyondHorizon
from cslab.subject import (Judgment, Kind, Session, box, build_trace, decided_by, schedule, step_session,
                           tested_by, validate_schedule)

A, nA, nnA = Judgment.affirm("A"), Judgment.refute("A"), Judgment.doubleneg("A")


def codes(raw):
    with pytest.raises(ScheduleError) as info:
        validate_schedule(raw)
    return sorted(v.code for v in info.value.violations)


def test_valid_schedule():
    s = schedule(8, (3, A))
    assert s.horizon == 8 and s.stage_of(A) == 3


def test_contradictory_evidence():
    assert codes({"horizon": 8, "events": [(3, A), (5, nA)]}) == ["ContradictoryEvidence"]
    assert codes({"horizon": 8, "events": [(3, nnA), (5, nA)]}) == ["ContradictoryEvidence"]


def test_affirm_with_doubleneg_is_consistent():
    assert schedule(8, (2, nnA), (5, A)).stage_of(A) == 5


def test_stage_out_of_range_and_duplicates_all_reported():
    raw = {"horizon": 8, "events": [(9, A), (2, A), {"stage": -1, "atom": "B", "kind": "refute"}]}
    assert codes(raw) == ["DuplicateEvent", "StageOutOfRange", "StageOutOfRange"]
    assert codes({"horizon": 0, "events": []}) == ["StageOutOfRange"]


def test_malformed():
    assert codes({"events": []}) == ["Malformed"]


def test_knowledge_accumulates():
    t = build_trace(schedule(4, (2, A)))
    assert t.knowledge == (frozenset(), frozenset(), {A}, {A}, {A})
    t = build_trace(schedule(3, (1, nA), (2, Judgment.affirm("B"))))
    assert t.knowledge[2] == {nA, Judgment.affirm("B")}
    assert all(k == frozenset() for k in build_trace(schedule(5)).knowledge)


def test_box_table():
    t = build_trace(schedule(8, (3, A)))
    assert not box(t, 2, A) and box(t, 3, A) and box(t, 5, A)
    assert not box(t, 0, A)
    with pytest.raises(StageBeyondHorizon):
        box(t, 9, A)


def test_tested_and_decided():
    t = build_trace(schedule(4, (2, nnA)))
    assert tested_by(t, 2, "A") and not tested_by(t, 1, "A")
    assert not decided_by(t, 4, "A")
    t = build_trace(schedule(4, (2, A)))
    assert not tested_by(t, 2, "A") and decided_by(t, 2, "A")
    t = build_trace(schedule(4))
    assert not any(tested_by(t, n, "A") for n in range(5))


events = st.lists(st.tuples(st.integers(1, 8), st.sampled_from(["A", "B"]), st.sampled_from(list(Kind))), max_size=4)


@given(events)
def test_box_monotone_in_stage(evs):
    raw = {"horizon": 8, "events": [{"stage": s, "atom": a, "kind": k.value} for s, a, k in evs]}
    try:
        t = build_trace(validate_schedule(raw))
    except ScheduleError:
        return
    for j in {Judgment(a, k) for _, a, k in evs}:
        seen = [box(t, n, j) for n in range(9)]
        assert seen == sorted(seen)


def test_schedule_is_canonical():
    a = validate_schedule({"horizon": 5, "events": [(4, Judgment.affirm("B")), (1, A)]})
    b = validate_schedule({"horizon": 5, "events": [(1, A), (4, Judgment.affirm("B"))]})
    assert a == b


def test_session_prefix_example():
    s = Session()
    for _ in range(3):
        step_session(s, "advance")
    _, rep = step_session(s, "inject", A)
    assert rep.ok and s.stage == 4
    _, rep = step_session(s, "query", "prefix", "r1948", "A")
    assert [str(v) for v in rep.result] == ["0", "0", "0", "1/16"]


def test_session_rejects_contradiction_unchanged():
    s = Session()
    step_session(s, "inject", A)
    before = (s.stage, list(s.events))
    _, rep = step_session(s, "inject", nA)
    assert not rep.ok and "ContradictoryEvidence" in rep.message
    assert (s.stage, s.events) == before


def test_session_query_beyond_stage_is_unknown():
    s = Session()
    step_session(s, "advance", 2)
    _, rep = step_session(s, "query", "box", 5, A)
    assert rep.result.is_unknown
    _, rep = step_session(s, "query", "tested", 1, "A")
    assert rep.result.is_refuted


def test_session_limit():
    s = Session(max_horizon=2)
    _, rep = step_session(s, "advance", 3)
    assert not rep.ok and s.stage == 0
