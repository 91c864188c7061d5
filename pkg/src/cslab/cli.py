"""Command line: ``cslab run | omega-csv | repl | logic check | logic countermodel``.

Exit codes: 0 success, 1 assertion failure (or a formula that is not
valid), 2 usage or schema error.
"""

from __future__ import annotations

import argparse
import cmd
import csv
import io
import sys
from fractions import Fraction
from pathlib import Path

from .constructions import format_prefix, prefix_for_session, verdict_for_session
from .errors import CSLabError, Exhausted, SchemaError, ScheduleError
from .logic.formula import atoms as formula_atoms, parse, to_text
from .logic.search import atom_schedules, countermodel_search
from .logic.semantics import BranchModel, eval_trace
from .numeric import as_interval, sqrt_value, to_decimal
from .omega import TANGENT_SLOPE_SQUARED, sum_omega
from .scenario import run_scenario
from .subject import Judgment, Kind, Session, build_trace, step_session

#: Root precision used for CSV output, well past the 12 printed decimals.
CSV_BITS = 80


# -- omega-csv ----------------------------------------------------------------------------

def omega_rows(nu_max: int, samples: int):
    """Rows ``(x, sum_omega, tangent_pos, tangent_neg)`` on ``x = k/samples`` over ``[-1, 1]``."""
    slope = as_interval(sqrt_value(TANGENT_SLOPE_SQUARED, CSV_BITS)).mid
    for k in range(-samples, samples + 1):
        x = Fraction(k, samples)
        y = as_interval(sum_omega(x, nu_max, CSV_BITS)).mid
        yield tuple(to_decimal(v) for v in (x, y, slope * x, -slope * x))


def emit_omega_csv(nu_max: int, samples: int, out) -> int:
    if not 1 <= nu_max <= 16:
        raise ValueError("nu_max must be in 1..16")
    if not 1 <= samples <= 10 ** 6:
        raise ValueError("samples must be in 1..10**6")
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["x", "sum_omega", "tangent_pos", "tangent_neg"])
    n = 0
    for row in omega_rows(nu_max, samples):
        w.writerow(row)
        n += 1
    Path(out).write_text(buf.getvalue(), encoding="ascii")
    return n


# -- REPL ---------------------------------------------------------------------------------

class StageRepl(cmd.Cmd):
    intro = "stage stepper; commands: advance [n], inject <atom> <kind>, show <construction> [atom], " \
            "verdict <relation> <left> <right> [atom], quit"
    prompt = "cs> "

    def __init__(self, stdin=None, stdout=None, max_horizon: int = 64):
        super().__init__(stdin=stdin, stdout=stdout)
        if stdin is not None:
            self.use_rawinput = False
        self.session = Session(max_horizon)

    def say(self, text):
        self.stdout.write(text + "\n")

    def do_advance(self, arg):
        steps = int(arg) if arg.strip() else 1
        _, rep = step_session(self.session, "advance", steps)
        self.say(rep.message)

    def do_inject(self, arg):
        parts = arg.split()
        if len(parts) != 2:
            self.say("usage: inject <atom> <affirm|refute|doubleneg>")
            return
        try:
            j = Judgment(parts[0], Kind.parse(parts[1]))
        except ValueError as exc:
            self.say(str(exc))
            return
        _, rep = step_session(self.session, "inject", j)
        self.say(rep.message)

    def do_show(self, arg):
        parts = arg.split()
        if not parts:
            self.say("usage: show <construction> [atom]")
            return
        try:
            pre = prefix_for_session(self.session, parts[0], parts[1] if len(parts) > 1 else "A")
        except (CSLabError, ValueError) as exc:
            self.say(str(exc))
            return
        self.say(f"{parts[0]} at stage {self.session.stage}: {format_prefix(pre)}")

    def do_verdict(self, arg):
        parts = arg.split()
        if len(parts) not in (3, 4):
            self.say("usage: verdict <apart|less> <left> <right> [atom]")
            return
        try:
            v = verdict_for_session(self.session, *parts)
        except (CSLabError, ValueError) as exc:
            self.say(str(exc))
            return
        self.say(v.describe())

    def do_quit(self, arg):
        return True

    do_EOF = do_quit

    def emptyline(self):
        pass

    def default(self, line):
        self.say(f"unknown command: {line}")


# -- logic ---------------------------------------------------------------------------------

def describe_model(model: BranchModel) -> str:
    lines = []
    for w in model.worlds():
        true = sorted(a for a, ws in model.valuation.items() if w in ws)
        par = "-" if model.parent[w] is None else model.parent[w]
        lines.append(f"  world {w} (depth {model.depth[w]}, parent {par}): {', '.join(true) or 'nothing'}")
    return "\n".join(lines)


def logic_check(text: str, mode: str, horizon: int, out) -> int:
    phi = parse(text)
    if mode == "trace":
        names = formula_atoms(phi)
        total = bad = 0
        first = None
        for sched in atom_schedules(names, horizon):
            total += 1
            if not eval_trace(build_trace(sched), phi):
                bad += 1
                first = first or sched
        print(f"{to_text(phi)}: true on {total - bad}/{total} schedules (H={horizon})", file=out)
        if first is not None:
            print(f"  first counterexample: {first.to_dict()['events']}", file=out)
        return 0 if bad == 0 else 1
    try:
        model, w = countermodel_search(phi, max_depth=horizon)
    except Exhausted:
        print(f"{to_text(phi)}: no countermodel up to depth {horizon}", file=out)
        return 0
    print(f"{to_text(phi)}: falsified at world {w} of a {model.size}-world model", file=out)
    print(describe_model(model), file=out)
    return 1


def logic_countermodel(text: str, max_worlds: int, mode: str, out) -> int:
    phi = parse(text)
    try:
        model, w = countermodel_search(phi, max_worlds, mode)
    except Exhausted as exc:
        print(f"Exhausted: {exc}", file=out)
        return 0
    print(f"countermodel to {to_text(phi)} ({model.size} worlds, falsified at world {w}):", file=out)
    print(describe_model(model), file=out)
    return 0


# -- entry point -----------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="cslab", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run a scenario file")
    run.add_argument("file")

    om = sub.add_parser("omega-csv", help="tabulate the bump sum and its tangents")
    om.add_argument("--nu-max", type=int, default=4)
    om.add_argument("--samples", type=int, default=1000, help="samples per unit length")
    om.add_argument("--out", required=True)

    sub.add_parser("repl", help="interactive stage stepper")

    lg = sub.add_parser("logic", help="stage-logic tools")
    lsub = lg.add_subparsers(dest="logic_command", required=True)
    chk = lsub.add_parser("check", help="check a formula on all schedules or trees")
    chk.add_argument("formula")
    chk.add_argument("--mode", choices=["trace", "branching"], default="trace")
    chk.add_argument("--horizon", type=int, default=4)
    cm = lsub.add_parser("countermodel", help="search a countermodel")
    cm.add_argument("formula")
    cm.add_argument("--max-worlds", type=int, default=31)
    cm.add_argument("--semantics", choices=["all", "path"], default="all")
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code else 0
    out = sys.stdout
    try:
        if args.command == "run":
            rep = run_scenario(args.file)
            print(rep.text(), file=out)
            return rep.exit_code
        if args.command == "omega-csv":
            n = emit_omega_csv(args.nu_max, args.samples, args.out)
            print(f"wrote {n} rows to {args.out}", file=out)
            return 0
        if args.command == "repl":
            StageRepl().cmdloop()
            return 0
        if args.logic_command == "check":
            return logic_check(args.formula, args.mode, args.horizon, out)
        return logic_countermodel(args.formula, args.max_worlds, args.semantics, out)
    except (SchemaError, ScheduleError, FileNotFoundError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except CSLabError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
