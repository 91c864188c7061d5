"""Bounded countermodel search and the axiom-suite checks.

The search ranges over trees with one or two children per inner world and
all leaves at the same depth ``D``, for ``D = 0, 1, ...`` while a chain of
that depth still fits in ``max_worlds``.  It works bottom-up on *profiles*:
everything the parent of a world needs to know about it (the subformulas
forced there, and for stage operators the subformulas forced at all, resp.
the first-path, descendants ``j`` levels down).  Only the smallest subtree
per profile is kept, so the search is exhaustive over its class without
enumerating trees one by one.

``box[n]`` with ``n`` above the current depth refers to an ancestor.  Those
facts are passed down as a context that is guessed at the ancestor and
checked against what the ancestor actually forces.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from ..errors import Exhausted
from ..subject import Judgment, Kind, build_trace, validate_schedule
from .formula import (And, Atom, Bottom, Box, Formula, G, Imp, Not, Or, atoms, conj, disj,
                      has_stage_operators, subformulas, to_text)
from .semantics import MODES, BranchModel, eval_branching, eval_trace, monotonicity_violations


@dataclass(frozen=True)
class _Profile:
    forced: frozenset
    below_all: tuple = ()
    below_path: tuple = ()


@dataclass(frozen=True)
class _Witness:
    valuation: frozenset
    children: tuple = ()
    size: int = 1


class _Search:
    def __init__(self, phi: Formula, mode: str, max_worlds: int):
        self.phi = phi
        self.mode = mode
        self.max_worlds = max_worlds
        self.subs = subformulas(phi)
        self.atoms = atoms(phi)
        self.staged = has_stage_operators(phi)
        self.boxes = [q for q in self.subs if isinstance(q, Box)]
        self.valuations = [frozenset(c) for r in range(len(self.atoms) + 1)
                           for c in itertools.combinations(self.atoms, r)]
        self.memo: dict = {}

    def level(self, D: int, d: int, ctx: frozenset) -> dict[_Profile, _Witness]:
        # without stage operators a level depends only on its height
        key = (D - d, ctx) if not self.staged else (D, d, ctx)
        hit = self.memo.get(key)
        if hit is None:
            hit = self.memo[key] = self._level(D, d, ctx)
        return hit

    def _level(self, D, d, ctx):
        out: dict[_Profile, _Witness] = {}
        room = self.max_worlds - d  # a chain to this world already uses d worlds
        guesses = [q for q in self.boxes if q.n == d and d < D]
        for g in _subsets(guesses):
            g = frozenset(g)
            if d == D:
                options = [()]
            else:
                below = self.level(D, d + 1, ctx | {(q, True) for q in g} | {(q, False) for q in guesses if q not in g})
                items = list(below.items())
                options = [(it,) for it in items]
                pairs = itertools.permutations(items, 2) if self.mode == "path" else itertools.combinations(items, 2)
                options += list(pairs)
            for kids in options:
                size = 1 + sum(w.size for _, w in kids)
                if size > room:
                    continue
                for val in self.valuations:
                    if any(not val <= {a for a in self.atoms if Atom(a) in p.forced} for p, _ in kids):
                        continue
                    prof = self._profile(D, d, ctx, val, [p for p, _ in kids])
                    if any((q in prof.forced) != (q in g) for q in guesses):
                        continue
                    old = out.get(prof)
                    if old is None or size < old.size:
                        out[prof] = _Witness(val, tuple(w for _, w in kids), size)
        return out

    def _profile(self, D, d, ctx, val, kids) -> _Profile:
        ctx_map = dict(ctx)
        if self.staged:
            span = D - d
            below_all, below_path = [], []
            for j in range(1, span + 1):
                if j == 1:
                    below_all.append(frozenset.intersection(*[k.forced for k in kids]))
                    below_path.append(kids[0].forced)
                else:
                    below_all.append(frozenset.intersection(*[k.below_all[j - 2] for k in kids]))
                    below_path.append(kids[0].below_path[j - 2])
        F = set()

        def at(offset, q, path=False):
            if offset == 0:
                return q in F
            rows = below_path if path else below_all
            return q in rows[offset - 1]

        for q in self.subs:
            if isinstance(q, Atom):
                ok = q.name in val
            elif isinstance(q, Bottom):
                ok = False
            elif isinstance(q, And):
                ok = q.left in F and q.right in F
            elif isinstance(q, Or):
                ok = q.left in F or q.right in F
            elif isinstance(q, Imp):
                ok = (q.left not in F or q.right in F) and all(q in k.forced for k in kids)
            elif isinstance(q, Box):
                if q.n < d:
                    ok = ctx_map[q]
                else:
                    ok = at(min(q.n, D) - d, q.body)
            elif isinstance(q, G):
                ok = at(min(d + q.n, D) - d, q.body, self.mode == "path")
            else:
                raise TypeError(f"not a formula: {q!r}")
            if ok:
                F.add(q)
        if self.staged:
            return _Profile(frozenset(F), tuple(below_all), tuple(below_path))
        return _Profile(frozenset(F))


def _subsets(items):
    for r in range(len(items) + 1):
        yield from itertools.combinations(items, r)


def _build(w: _Witness) -> BranchModel:
    parent: list[int | None] = []
    vals: list[frozenset] = []
    queue = [(w, None)]
    while queue:
        node, par = queue.pop(0)
        parent.append(par)
        vals.append(node.valuation)
        me = len(parent) - 1
        queue.extend((c, me) for c in node.children)
    names = set().union(*vals)
    return BranchModel(tuple(parent), {a: frozenset(i for i, v in enumerate(vals) if a in v) for a in names})


def countermodel_search(phi: Formula, max_worlds: int = 31, mode: str = "all",
                        max_depth: int | None = None) -> tuple[BranchModel, int]:
    """A model and world (always the root) where ``phi`` is not forced.

    Raises :class:`Exhausted` when no tree in the searched class has one.
    """
    if mode not in MODES:
        raise ValueError(f"mode must be one of {MODES}")
    if not 1 <= max_worlds <= 1 << 10:
        raise ValueError("max_worlds must be between 1 and 1024")
    search = _Search(phi, mode, max_worlds)
    top = max_worlds - 1 if max_depth is None else min(max_depth, max_worlds - 1)
    for D in range(top + 1):
        found = [w for p, w in search.level(D, 0, frozenset()).items() if phi not in p.forced]
        if found:
            model = _build(min(found, key=lambda w: w.size))
            assert not eval_branching(model, 0, phi, mode), "search and evaluator disagree"
            return model, 0
    raise Exhausted(f"no countermodel to {to_text(phi)} with at most {max_worlds} worlds")


# -- schema expansions -----------------------------------------------------------------

def exists_G_implies(b: Formula, upto: int) -> Formula:
    """``(G[1](b) | ... | G[upto](b)) -> b``."""
    return Imp(disj(G(n, b) for n in range(1, upto + 1)), b)


def forall_G_decided(a: Formula, upto: int) -> Formula:
    """``(G[1](a) | ~G[1](a)) & ... & (G[upto](a) | ~G[upto](a))``."""
    return conj(Or(G(n, a), Not(G(n, a))) for n in range(1, upto + 1))


def implies_exists_G(a: Formula, upto: int) -> Formula:
    """``a -> (G[1](a) | ... | G[upto](a))``."""
    return Imp(a, disj(G(n, a) for n in range(1, upto + 1)))


# -- axiom suite --------------------------------------------------------------------------

def atom_schedules(names, horizon: int):
    """Every schedule over ``names`` where each atom gets no event, or Affirm / Refute /
    DoubleNeg at one stage in ``1..H``, or Affirm and DoubleNeg at two stages."""
    per_atom = []
    for a in names:
        opts = [()]
        for kind in Kind:
            opts += [((s, a, kind),) for s in range(1, horizon + 1)]
        opts += [((s, a, Kind.AFFIRM), (t, a, Kind.DOUBLENEG))
                 for s in range(1, horizon + 1) for t in range(1, horizon + 1)]
        per_atom.append(opts)
    for combo in itertools.product(*per_atom):
        events = [{"stage": s, "atom": a, "kind": k.value} for part in combo for s, a, k in part]
        yield validate_schedule({"horizon": horizon, "events": events})


def cs_instances(names, horizon: int) -> dict[str, list[Formula]]:
    """Trace-level instances of the stage axioms for every atom and stage pair."""
    out: dict[str, list[Formula]] = {"CS1": [], "CS2": [], "CS3-": [], "CS3+": []}
    for a in names:
        A = Atom(a)
        for n in range(horizon + 1):
            out["CS1"].append(Or(Box(n, A), Not(Box(n, A))))
            out["CS3-"].append(Imp(Box(n, A), A))
            for m in range(n, horizon + 1):
                out["CS2"].append(Imp(Box(n, A), Box(m, A)))
        out["CS3+"].append(Imp(A, disj(Box(n, A) for n in range(horizon + 1))))
    return out


@dataclass
class SuiteReport:
    horizon: int
    atoms: tuple[str, ...]
    schedules: int = 0
    checks: int = 0
    failures: list = field(default_factory=list)
    branching: dict = field(default_factory=dict)

    @property
    def trace_ok(self) -> bool:
        return not self.failures

    def lines(self) -> list[str]:
        out = [f"trace: {self.schedules} schedules, {self.checks} checks, {len(self.failures)} failures"]
        for (name, mode), res in sorted(self.branching.items()):
            out.append(f"branching [{mode}] {name}: {res}")
        return out


def check_axiom_suite(horizon: int, n_atoms: int = 1, branching: bool = True,
                      upto: int = 4, max_worlds: int = 31) -> SuiteReport:
    """Sweep the stage axioms over every schedule, then probe the future-stage schemata."""
    names = tuple("ABCD"[:n_atoms])
    rep = SuiteReport(horizon, names)
    inst = cs_instances(names, horizon)
    for sched in atom_schedules(names, horizon):
        rep.schedules += 1
        trace = build_trace(sched)
        for label, forms in inst.items():
            for f in forms:
                rep.checks += 1
                if eval_trace(trace, f) is not True:
                    rep.failures.append((label, to_text(f), sched))
    if branching:
        A, B = Atom("A"), Atom("B")
        targets = {
            "exists-G-implies": exists_G_implies(B, upto),
            "forall-G-decided": forall_G_decided(A, upto),
            "implies-exists-G": implies_exists_G(A, upto),
        }
        for mode in MODES:
            for name, f in targets.items():
                try:
                    model, w = countermodel_search(f, max_worlds, mode, max_depth=upto)
                    bad = monotonicity_violations(model, f, mode)
                    rep.branching[(name, mode)] = f"countermodel with {model.size} worlds" + (
                        f" ({len(bad)} monotonicity failures)" if bad else "")
                except Exhausted:
                    rep.branching[(name, mode)] = "no countermodel"
    return rep
