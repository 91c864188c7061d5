"""Two readings of stage formulas.

Trace semantics is classical over one complete schedule: an atom holds when
it is affirmed within the horizon, ``box[n]`` looks the literal up in the
stage-``n`` knowledge table, and ``G[n]`` (evaluated from stage 0) coincides
with ``box[n]``.

Branching semantics is Kripke forcing over a finite tree of knowledge
states.  ``box[n](p)`` at a world of depth ``d`` asks for ``p`` at the depth-``n``
ancestor when ``n <= d`` and at every depth-``n`` descendant otherwise.
``G[n](p)`` asks for ``p`` at every descendant ``n`` levels further down
(``mode="all"``) or only at the one reached by following first children
(``mode="path"``).  Leaves persist: requests past the bottom of a branch are
answered at its leaf, unless ``strict`` is set.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping

from ..errors import CSLabError, DepthExceeded
from ..subject import Judgment, SubjectTrace, box
from .formula import And, Atom, Bottom, Box, Formula, G, Imp, Or, is_negation, subformulas

MODES = ("all", "path")


class UnsupportedFormula(CSLabError):
    pass


# -- trace semantics ---------------------------------------------------------------------

def _literal(p: Formula) -> Judgment:
    """The judgment a ``box`` body names: ``A``, ``~A`` or ``~~A``."""
    if isinstance(p, Atom):
        return Judgment.affirm(p.name)
    if is_negation(p) and isinstance(p.left, Atom):
        return Judgment.refute(p.left.name)
    if is_negation(p) and is_negation(p.left) and isinstance(p.left.left, Atom):
        return Judgment.doubleneg(p.left.left.name)
    raise UnsupportedFormula("trace semantics only boxes literals A, ~A, ~~A")


def eval_trace(trace: SubjectTrace, p: Formula) -> bool:
    if isinstance(p, Atom):
        return box(trace, trace.horizon, Judgment.affirm(p.name))
    if isinstance(p, Bottom):
        return False
    if isinstance(p, And):
        return eval_trace(trace, p.left) and eval_trace(trace, p.right)
    if isinstance(p, Or):
        return eval_trace(trace, p.left) or eval_trace(trace, p.right)
    if isinstance(p, Imp):
        return (not eval_trace(trace, p.left)) or eval_trace(trace, p.right)
    if isinstance(p, (Box, G)):
        return box(trace, p.n, _literal(p.body))
    raise TypeError(f"not a formula: {p!r}")


# -- branching models ----------------------------------------------------------------

@dataclass(frozen=True)
class BranchModel:
    """A rooted tree (world 0 is the root) with a monotone valuation."""

    parent: tuple[int | None, ...]
    valuation: Mapping[str, frozenset[int]]
    labels: tuple[str, ...] = ()
    children: tuple[tuple[int, ...], ...] = field(init=False, repr=False, compare=False)
    depth: tuple[int, ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        n = len(self.parent)
        if n == 0 or self.parent[0] is not None or any(q is None for q in self.parent[1:]):
            raise ValueError("world 0 must be the unique root")
        kids = [[] for _ in range(n)]
        depth = [0] * n
        for w in range(1, n):
            q = self.parent[w]
            if not 0 <= q < w:
                raise ValueError("parents must precede their children")
            kids[q].append(w)
            depth[w] = depth[q] + 1
        object.__setattr__(self, "children", tuple(tuple(k) for k in kids))
        object.__setattr__(self, "depth", tuple(depth))
        object.__setattr__(self, "valuation", {a: frozenset(ws) for a, ws in self.valuation.items()})
        for a, ws in self.valuation.items():
            for w in ws:
                for c in self.children[w]:
                    if c not in ws:
                        raise ValueError(f"valuation of {a} is not monotone at world {w}")

    @property
    def size(self) -> int:
        return len(self.parent)

    @property
    def height(self) -> int:
        return max(self.depth)

    def worlds(self) -> range:
        return range(self.size)

    def descendants(self, w: int) -> list[int]:
        """``w`` and everything below it."""
        out, stack = [], [w]
        while stack:
            v = stack.pop()
            out.append(v)
            stack.extend(self.children[v])
        return sorted(out)

    def ancestor(self, w: int, d: int) -> int:
        while self.depth[w] > d:
            w = self.parent[w]
        return w

    def at_depth(self, w: int, d: int) -> list[int]:
        """Descendants of ``w`` at depth ``d``, with shallower leaves standing in for missing ones."""
        return [v for v in self.descendants(w)
                if self.depth[v] == d or (self.depth[v] < d and not self.children[v])]

    def first_path(self, w: int, d: int) -> int:
        while self.depth[w] < d and self.children[w]:
            w = self.children[w][0]
        return w

    def pairs(self) -> Iterable[tuple[int, int]]:
        """Every ``(w, v)`` with ``w <= v`` in the tree order."""
        for w in self.worlds():
            for v in self.descendants(w):
                yield w, v


def chain_model(valuations: Iterable[Iterable[str]]) -> BranchModel:
    vals = [set(v) for v in valuations]
    names = set().union(*vals) if vals else set()
    parent = tuple([None] + list(range(len(vals) - 1)))
    return BranchModel(parent, {a: frozenset(i for i, v in enumerate(vals) if a in v) for a in names})


def trace_model(trace: SubjectTrace, names: Iterable[str] | None = None) -> BranchModel:
    """The single-branch model of a trace: world ``n`` knows what is affirmed by stage ``n``."""
    names = list(names) if names is not None else list(trace.schedule.atoms)
    return chain_model([{a for a in names if box(trace, n, Judgment.affirm(a))}
                        for n in range(trace.horizon + 1)])


class Forcing:
    """Memoised forcing relation of one model under one mode."""

    def __init__(self, model: BranchModel, mode: str = "all", strict: bool = False):
        if mode not in MODES:
            raise ValueError(f"mode must be one of {MODES}")
        self.model = model
        self.mode = mode
        self.strict = strict
        self._memo: dict[tuple[int, Formula], bool] = {}

    def _targets(self, w: int, d: int) -> list[int]:
        m = self.model
        if self.strict and d > m.height:
            raise DepthExceeded(f"depth {d} below a tree of height {m.height}")
        return m.at_depth(w, d)

    def forced(self, w: int, p: Formula) -> bool:
        key = (w, p)
        hit = self._memo.get(key)
        if hit is None:
            hit = self._memo[key] = self._force(w, p)
        return hit

    def _force(self, w, p) -> bool:
        m = self.model
        if isinstance(p, Atom):
            return w in m.valuation.get(p.name, ())
        if isinstance(p, Bottom):
            return False
        if isinstance(p, And):
            return self.forced(w, p.left) and self.forced(w, p.right)
        if isinstance(p, Or):
            return self.forced(w, p.left) or self.forced(w, p.right)
        if isinstance(p, Imp):
            if self.forced(w, p.left) and not self.forced(w, p.right):
                return False
            return all(self.forced(c, p) for c in m.children[w])
        if isinstance(p, Box):
            if p.n <= m.depth[w]:
                return self.forced(m.ancestor(w, p.n), p.body)
            return all(self.forced(v, p.body) for v in self._targets(w, p.n))
        if isinstance(p, G):
            d = m.depth[w] + p.n
            if self.mode == "path":
                if self.strict and d > m.height:
                    raise DepthExceeded(f"depth {d} below a tree of height {m.height}")
                return self.forced(m.first_path(w, d), p.body)
            return all(self.forced(v, p.body) for v in self._targets(w, d))
        raise TypeError(f"not a formula: {p!r}")


def eval_branching(model: BranchModel, w: int, p: Formula, mode: str = "all", strict: bool = False) -> bool:
    return Forcing(model, mode, strict).forced(w, p)


def monotonicity_violations(model: BranchModel, p: Formula, mode: str = "all") -> list[tuple[int, int, Formula]]:
    """``(w, v, q)`` with ``w <= v`` and ``q`` a subformula forced at ``w`` but not at ``v``."""
    f = Forcing(model, mode)
    subs = subformulas(p)
    return [(w, v, q) for w, v in model.pairs() for q in subs if f.forced(w, q) and not f.forced(v, q)]


# -- the evidence tree for one atom -----------------------------------------------------

def evidence_tree(atom: str, depth: int, alpha_upto: int | None = None) -> BranchModel:
    """Binary tree of evidence states for ``atom`` up to ``depth``.

    Each undecided world branches into "affirmed now" and "not yet"; a world
    where ``atom`` is affirmed has a single successor.  For ``k <= alpha_upto``
    the atoms ``a{k}_1`` and ``a{k}_0`` record the settled value of the
    witness ``alpha(k)`` (affirmed by stage ``k`` or not), true from stage
    ``k`` on.
    """
    alpha_upto = depth if alpha_upto is None else alpha_upto
    parent: list[int | None] = [None]
    proved_at: list[int | None] = [None]
    labels = ["root"]
    frontier = [0]
    for d in range(1, depth + 1):
        nxt = []
        for w in frontier:
            options = [proved_at[w]] if proved_at[w] is not None else [d, None]
            for opt in options:
                parent.append(w)
                proved_at.append(opt)
                labels.append(f"{labels[w]}/{'+' if opt == d else '.'}")
                nxt.append(len(parent) - 1)
        frontier = nxt
    depth_of = BranchModel(tuple(parent), {}).depth
    val: dict[str, set[int]] = {atom: set()}
    for w, s in enumerate(proved_at):
        if s is not None:
            val[atom].add(w)
    for k in range(alpha_upto + 1):
        ones, zeros = set(), set()
        for w, s in enumerate(proved_at):
            if depth_of[w] >= k:
                (ones if s is not None and s <= k else zeros).add(w)
        val[f"a{k}_1"], val[f"a{k}_0"] = ones, zeros
    return BranchModel(tuple(parent), {a: frozenset(ws) for a, ws in val.items()}, tuple(labels))
