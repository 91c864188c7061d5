"""JSON scenarios: a schedule, named constructions over it, and assertions.

Top-level keys: ``version``, ``atoms``, ``horizon``, ``events``,
``constructions``, ``assertions``, ``logic``, ``seed``, plus free-form
metadata (``name``, ``paper_ref``, ``description``).  See the README for the
list of construction types and assertion kinds.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Any, Callable

import jsonschema

from . import bks, constructions as cons
from .creal import CReal, apart, check_modulus, constant, dyadic_embed, eventually_constant, measurably_less
from .errors import CSLabError, SchemaError
from .logic.formula import parse
from .logic.search import countermodel_search
from .logic.semantics import eval_branching, eval_trace, evidence_tree
from .numeric import dyadic, within
from .omega import Z_function, omega, sum_omega
from .subject import Judgment, Kind, SubjectTrace, build_trace, validate_schedule

SCHEMA_VERSION = 1

_EVENT = {
    "type": "object",
    "required": ["stage", "atom", "kind"],
    "properties": {
        "stage": {"type": "integer", "minimum": 0},
        "atom": {"type": "string"},
        "kind": {"enum": [k.value for k in Kind]},
    },
    "additionalProperties": False,
}

SCHEMA = {
    "type": "object",
    "required": ["version", "atoms", "horizon", "events", "constructions", "assertions"],
    "properties": {
        "version": {"const": SCHEMA_VERSION},
        "name": {"type": "string"},
        "paper_ref": {"type": "string"},
        "description": {"type": "string"},
        "atoms": {"type": "array", "items": {"type": "string"}},
        "horizon": {"type": "integer", "minimum": 1},
        "events": {"type": "array", "items": _EVENT},
        "constructions": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["id", "type"],
                "properties": {"id": {"type": "string"}, "type": {"type": "string"}, "params": {"type": "object"}},
                "additionalProperties": False,
            },
        },
        "assertions": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["target", "kind"],
                "properties": {"target": {"type": "string"}, "kind": {"type": "string"}},
            },
        },
        "logic": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["formula", "mode", "expect"],
                "properties": {
                    "formula": {"type": "string"},
                    "mode": {"enum": ["trace", "branching", "path", "countermodel"]},
                    "expect": {"type": "boolean"},
                },
            },
        },
        "seed": {"type": "integer"},
    },
}


@dataclass
class AssertionResult:
    label: str
    passed: bool
    detail: str

    def line(self) -> str:
        return f"[{'PASS' if self.passed else 'FAIL'}] {self.label}: {self.detail}"


@dataclass
class ScenarioReport:
    name: str
    paper_ref: str
    results: list[AssertionResult] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.results)

    @property
    def exit_code(self) -> int:
        return 0 if self.passed else 1

    def text(self) -> str:
        head = f"scenario {self.name} ({self.paper_ref})"
        tail = f"{sum(r.passed for r in self.results)}/{len(self.results)} assertions passed"
        return "\n".join([head, *(r.line() for r in self.results), tail])


def load_scenario(path) -> dict:
    try:
        data = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise SchemaError(f"{path}: not valid JSON ({exc})") from None
    validate_scenario(data)
    return data


def validate_scenario(data: dict):
    try:
        jsonschema.validate(data, SCHEMA)
    except jsonschema.ValidationError as exc:
        where = "/".join(str(p) for p in exc.absolute_path) or "top level"
        raise SchemaError(f"{where}: {exc.message}") from None
    declared = set(data["atoms"])
    for e in data["events"]:
        if e["atom"] not in declared:
            raise SchemaError(f"event atom {e['atom']!r} is not declared in atoms")
    ids = [c["id"] for c in data["constructions"]]
    if len(ids) != len(set(ids)):
        raise SchemaError("construction ids must be unique")
    for c in data["constructions"]:
        if c["type"] not in BUILDERS:
            raise SchemaError(f"construction {c['id']!r}: unknown type {c['type']!r}")
        atom = c.get("params", {}).get("atom")
        if atom is not None and atom not in declared:
            raise SchemaError(f"construction {c['id']!r} uses undeclared atom {atom!r}")
    for a in data["assertions"]:
        if a["target"] not in ids:
            raise SchemaError(f"assertion targets unknown construction {a['target']!r}")
        if a["kind"] not in CHECKS:
            raise SchemaError(f"unknown assertion kind {a['kind']!r}")


# -- constructions ----------------------------------------------------------------------

class _Env:
    def __init__(self, data: dict):
        self.data = data
        self.seed = data.get("seed", 0)
        self.trace: SubjectTrace = build_trace(validate_schedule(data))
        self.built: dict[str, Any] = {}

    def get(self, key):
        obj = self.built[key]
        if isinstance(obj, Exception):
            raise obj
        return obj


def _judgment(p) -> Judgment:
    return Judgment(p.get("atom", "A"), Kind.parse(p.get("judgment", "affirm")))


def _schedule_real(kind):
    return lambda env, p: cons.build_schedule_real(kind, env.trace, p.get("atom", "A"), p)


BUILDERS: dict[str, Callable[[_Env, dict], Any]] = {
    **{k: _schedule_real(k) for k in cons.SCHEDULE_CONSTRUCTIONS},
    "constant": lambda env, p: constant(Fraction(p["value"])),
    "sqrt2": lambda env, p: cons.sqrt2(),
    "fleeing_1924": lambda env, p: cons.fleeing_sequence_1924(
        cons.FleeingProperty.with_critical(p.get("critical")), p.get("horizon", env.trace.horizon)),
    "dyadic_embed": lambda env, p: dyadic_embed(eventually_constant(p["terms"], p.get("tail", 1))),
    "negcont": lambda env, p: cons.negcont_r_omega(
        env.get(p["base"]), {k: env.get(v) for k, v in p.get("family", {}).items()},
        [tuple(d) for d in p.get("decisions", [])]),
    "alpha": lambda env, p: bks.alpha_from_trace(env.trace, _judgment(p)),
    "dedup": lambda env, p: bks.dedup(env.get(p["of"])),
    "zigzag": lambda env, p: bks.zigzag_merge([env.get(i) for i in p["family"]], p["length"]),
    "random_witness": lambda env, p: bks.random_witness(env.trace, p.get("atom", "A"), p.get("seed", env.seed)),
    "bks_plus": lambda env, p: bks.bks_plus_from_conditional(
        bks.conditional_prefix(env.trace, p.get("atom", "A"), cons.drift_for({"drift": "sqrt2", **p}))),
    "species_enumerator": lambda env, p: bks.species_enumerator(env.trace, p.get("inhabitant"), p.get("species", "X")),
    "cs_enumerate": lambda env, p: bks.cs_enumerate(env.trace, p.get("species", "X")),
    "omega": lambda env, p: (lambda x: omega(p["nu"], x)),
    "sum_omega": lambda env, p: (lambda x: sum_omega(x, p.get("nu_max"))),
    "Z": lambda env, p: Z_function(env.trace, p.get("atom", "A"), p.get("depth")),
}


# -- assertion kinds -------------------------------------------------------------------

def _fr(v) -> Fraction:
    return Fraction(str(v))


def _values(obj, n):
    if isinstance(obj, CReal):
        return list(obj.prefix(n))
    return list(obj)[:n]


def _check_prefix(env, obj, a):
    want = [_fr(v) for v in a["expected"]]
    got = _values(obj, len(want))
    shown = "(" + ",".join(str(v) for v in got) + ",...)"
    return got == want, shown


def _verdict_check(v, a):
    ok = v.status.value == a["expected"]
    if ok and "side" in a:
        ok = v.certificate.side == a["side"]
    if ok and "depth" in a:
        ok = v.depth == a["depth"]
    return ok, v.describe()


def _check_apart(env, obj, a):
    return _verdict_check(apart(env.get(a["other"]), obj, a.get("at_depth", env.trace.horizon)), a)


def _check_less(env, obj, a):
    return _verdict_check(measurably_less(env.get(a["other"]), obj, a.get("at_depth", env.trace.horizon)), a)


def _check_approx(env, obj, a):
    p = a["precision"]
    got = obj.approx(p)
    return within(got, _fr(a["expected"]), dyadic(p)), f"approx({p}) = {got}"


def _check_modulus(env, obj, a):
    bad = []
    for p in range(a.get("precision", 8) + 1):
        bad += check_modulus(obj, p, a.get("upto", env.trace.horizon))
    return not bad, "sound" if not bad else f"violated at {bad[:3]}"


def _check_equal_prefix(env, obj, a):
    n = a["length"]
    mine, theirs = _values(obj, n), _values(env.get(a["other"]), n)
    diff = [i for i in range(n) if mine[i] != theirs[i]]
    return (not diff) == a.get("expected", True), "identical" if not diff else f"differ at {diff[:5]}"


def _check_clauses(env, obj, a):
    rep = bks.verify_bks_clauses(obj, env.trace, _judgment(a), plus=a.get("plus", False))
    return rep.passed == a.get("expected", True), f"clauses {rep.outcomes()}"


def _check_enumerates(env, obj, a):
    got_in = [n for n in a.get("members", []) if not obj.enumerates(n)]
    got_out = [n for n in a.get("nonmembers", []) if obj.enumerates(n)]
    ok = not got_in and not got_out
    return ok, "biconditional holds" if ok else f"missed {got_in}, spurious {got_out}"


def _check_values(env, obj, a):
    bad = []
    for x, want in a["expected"].items():
        got = obj(_fr(x))
        if not within(got, _fr(want), _fr(a.get("tol", 0))):
            bad.append((x, str(got)))
    return not bad, "all values match" if not bad else f"mismatch {bad}"


def _check_wednesday(env, obj, a):
    mul, add = a.get("t", [2, 0])
    v = bks.wednesday_check(obj, lambda x: mul * x + add, env.trace, _judgment(a), a.get("assert_never", False))
    return _verdict_check(v, a)


CHECKS = {
    "prefix": _check_prefix,
    "apart": _check_apart,
    "less": _check_less,
    "approx": _check_approx,
    "modulus": _check_modulus,
    "equal_prefix": _check_equal_prefix,
    "clauses": _check_clauses,
    "enumerates": _check_enumerates,
    "values": _check_values,
    "wednesday": _check_wednesday,
    "raises": None,  # handled before the target is dereferenced
}


def _label(a) -> str:
    extra = f" vs {a['other']}" if "other" in a else ""
    return f"{a['kind']} {a['target']}{extra}"


def run_data(data: dict) -> ScenarioReport:
    validate_scenario(data)
    env = _Env(data)
    for c in data["constructions"]:
        try:
            env.built[c["id"]] = BUILDERS[c["type"]](env, c.get("params", {}))
        except (CSLabError, KeyError, ValueError) as exc:
            env.built[c["id"]] = exc
    rep = ScenarioReport(data.get("name", "unnamed"), data.get("paper_ref", ""))
    for a in data["assertions"]:
        label = _label(a)
        built = env.built[a["target"]]
        if a["kind"] == "raises":
            ok = isinstance(built, Exception) and type(built).__name__ == a["expected"]
            got = type(built).__name__ if isinstance(built, Exception) else "no error"
            rep.results.append(AssertionResult(label, ok, got))
            continue
        try:
            ok, detail = CHECKS[a["kind"]](env, env.get(a["target"]), a)
        except CSLabError as exc:
            ok, detail = False, f"{type(exc).__name__}: {exc}"
        rep.results.append(AssertionResult(label, bool(ok), detail))
    for item in data.get("logic", []):
        rep.results.append(_run_logic(env, item))
    return rep


def _run_logic(env: _Env, item: dict) -> AssertionResult:
    label = f"logic[{item['mode']}] {item['formula']}"
    try:
        phi = parse(item["formula"])
        mode = item["mode"]
        if mode == "trace":
            got = eval_trace(env.trace, phi)
        elif mode in ("branching", "path"):
            atom = item.get("atom", env.data["atoms"][0] if env.data["atoms"] else "A")
            tree = evidence_tree(atom, item.get("tree_depth", min(env.trace.horizon, 4)))
            got = eval_branching(tree, 0, phi, "all" if mode == "branching" else "path")
        else:
            try:
                model, _ = countermodel_search(phi, item.get("max_worlds", 31), item.get("semantics", "all"))
                got = True
            except CSLabError:
                got = False
    except CSLabError as exc:
        return AssertionResult(label, False, f"{type(exc).__name__}: {exc}")
    return AssertionResult(label, got == item["expect"], f"got {got}")


def run_scenario(path) -> ScenarioReport:
    return run_data(load_scenario(path))


def shipped_scenarios() -> list[Path]:
    return sorted((Path(__file__).parent / "scenarios").glob("*.json"))
