"""Formulas with stage operators: AST, parser and printer.

Grammar::

    formula := imp
    imp     := or ("->" imp)?
    or      := and ("|" and)*
    and     := unary ("&" unary)*
    unary   := "~" unary | "box" "[" nat "]" "(" formula ")"
             | "G" "[" nat "]" "(" formula ")" | "(" formula ")" | "false" | atom
    atom    := [A-Za-z][A-Za-z0-9_]*

Negation is sugar: ``~p`` is ``p -> false``.  ``->`` associates to the
right, ``|`` and ``&`` to the left.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterator, Union

from ..errors import FormulaSyntaxError

_ATOM_RE = re.compile(r"[A-Za-z][A-Za-z0-9_]*\Z")


@dataclass(frozen=True)
class Atom:
    name: str

    def __post_init__(self):
        if not _ATOM_RE.match(self.name) or self.name == "false":
            raise ValueError(f"bad atom name {self.name!r}")


@dataclass(frozen=True)
class Bottom:
    pass


@dataclass(frozen=True)
class And:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Or:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Imp:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Box:
    n: int
    body: "Formula"

    def __post_init__(self):
        if self.n < 0:
            raise ValueError("stage must be a natural")


@dataclass(frozen=True)
class G:
    n: int
    body: "Formula"

    def __post_init__(self):
        if self.n < 0:
            raise ValueError("stage must be a natural")


Formula = Union[Atom, Bottom, And, Or, Imp, Box, G]

FALSE = Bottom()


def Not(p: Formula) -> Imp:
    return Imp(p, FALSE)


def is_negation(p) -> bool:
    return isinstance(p, Imp) and isinstance(p.right, Bottom)


def disj(parts) -> Formula:
    parts = list(parts)
    if not parts:
        return FALSE
    out = parts[0]
    for q in parts[1:]:
        out = Or(out, q)
    return out


def conj(parts) -> Formula:
    parts = list(parts)
    if not parts:
        return Not(FALSE)
    out = parts[0]
    for q in parts[1:]:
        out = And(out, q)
    return out


def subformulas(p: Formula) -> list[Formula]:
    """Distinct subformulas, children before parents."""
    seen: dict[Formula, None] = {}

    def walk(q):
        if q in seen:
            return
        if isinstance(q, (And, Or, Imp)):
            walk(q.left)
            walk(q.right)
        elif isinstance(q, (Box, G)):
            walk(q.body)
        seen[q] = None

    walk(p)
    return list(seen)


def atoms(p: Formula) -> list[str]:
    return sorted({q.name for q in subformulas(p) if isinstance(q, Atom)})


def has_stage_operators(p: Formula) -> bool:
    return any(isinstance(q, (Box, G)) for q in subformulas(p))


# -- printing -------------------------------------------------------------------------

_IMP, _OR, _AND, _UNARY = range(4)


def _level(p) -> int:
    if is_negation(p):
        return _UNARY
    if isinstance(p, Imp):
        return _IMP
    if isinstance(p, Or):
        return _OR
    if isinstance(p, And):
        return _AND
    return _UNARY


def _show(p, need: int) -> str:
    text = to_text(p)
    return f"({text})" if _level(p) < need else text


def to_text(p: Formula) -> str:
    if isinstance(p, Atom):
        return p.name
    if isinstance(p, Bottom):
        return "false"
    if is_negation(p):
        return "~" + _show(p.left, _UNARY)
    if isinstance(p, Imp):
        return f"{_show(p.left, _OR)} -> {_show(p.right, _IMP)}"
    if isinstance(p, Or):
        return f"{_show(p.left, _OR)} | {_show(p.right, _AND)}"
    if isinstance(p, And):
        return f"{_show(p.left, _AND)} & {_show(p.right, _UNARY)}"
    if isinstance(p, Box):
        return f"box[{p.n}]({to_text(p.body)})"
    if isinstance(p, G):
        return f"G[{p.n}]({to_text(p.body)})"
    raise TypeError(f"not a formula: {p!r}")


# -- parsing --------------------------------------------------------------------------

_TOKEN_RE = re.compile(r"\s*(?:(->)|([|&~()\[\]])|(\d+)|([A-Za-z][A-Za-z0-9_]*))")


def _tokens(text: str) -> Iterator[tuple[str, str, int]]:
    pos = 0
    while True:
        while pos < len(text) and text[pos].isspace():
            pos += 1
        if pos >= len(text):
            yield ("end", "", pos)
            return
        m = _TOKEN_RE.match(text, pos)
        if not m:
            raise FormulaSyntaxError(f"unexpected character {text[pos]!r}", pos)
        start = m.start(m.lastindex)
        kind = ("op", "op", "nat", "ident")[m.lastindex - 1]
        yield (kind, m.group(m.lastindex), start)
        pos = m.end()


class _Parser:
    def __init__(self, text: str):
        self.toks = list(_tokens(text))
        self.i = 0

    @property
    def tok(self):
        return self.toks[self.i]

    def peek(self, k=1):
        return self.toks[min(self.i + k, len(self.toks) - 1)]

    def take(self, value=None, kind=None):
        t = self.tok
        if (value is not None and t[1] != value) or (kind is not None and t[0] != kind):
            want = repr(value) if value is not None else kind
            got = repr(t[1]) if t[0] != "end" else "end of input"
            raise FormulaSyntaxError(f"expected {want}, found {got}", t[2])
        self.i += 1
        return t

    def formula(self):
        return self.imp()

    def imp(self):
        left = self.or_()
        if self.tok[1] == "->":
            self.take("->")
            return Imp(left, self.imp())
        return left

    def or_(self):
        out = self.and_()
        while self.tok[1] == "|":
            self.take("|")
            out = Or(out, self.and_())
        return out

    def and_(self):
        out = self.unary()
        while self.tok[1] == "&":
            self.take("&")
            out = And(out, self.unary())
        return out

    def unary(self):
        kind, value, pos = self.tok
        if value == "~" and kind == "op":
            self.take("~")
            return Not(self.unary())
        if value == "(" and kind == "op":
            self.take("(")
            inner = self.formula()
            self.take(")")
            return inner
        if kind == "ident":
            if value in ("box", "G") and self.peek()[1] == "[":
                self.take()
                self.take("[")
                n = int(self.take(kind="nat")[1])
                self.take("]")
                self.take("(")
                body = self.formula()
                self.take(")")
                return Box(n, body) if value == "box" else G(n, body)
            self.take()
            return FALSE if value == "false" else Atom(value)
        got = repr(value) if kind != "end" else "end of input"
        raise FormulaSyntaxError(f"expected a formula, found {got}", pos)


def parse(text: str) -> Formula:
    p = _Parser(text)
    out = p.formula()
    if p.tok[0] != "end":
        raise FormulaSyntaxError(f"unexpected {p.tok[1]!r}", p.tok[2])
    return out
