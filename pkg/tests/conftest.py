import pytest

from cslab.subject import Judgment, Kind, build_trace, schedule

#: lines recorded by the acceptance suite, echoed in the terminal summary
ACCEPTANCE_LINES = []


def one_atom_schedules(horizon, atom="A", kinds=tuple(Kind)):
    """The empty schedule plus one event per (stage, kind), stages 1..H."""
    out = [schedule(horizon)]
    for kind in kinds:
        for s in range(1, horizon + 1):
            out.append(schedule(horizon, (s, Judgment(atom, kind))))
    return out


def one_atom_traces(horizon, atom="A", kinds=tuple(Kind)):
    return [build_trace(s) for s in one_atom_schedules(horizon, atom, kinds)]


def event_of(trace):
    """(stage, kind) of the single event on a swept trace, or None."""
    ev = trace.schedule.events
    return (ev[0].stage, ev[0].judgment.kind) if ev else None


@pytest.fixture(scope="session")
def sweep10():
    return one_atom_traces(10)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
