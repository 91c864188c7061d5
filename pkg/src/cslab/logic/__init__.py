"""Stage formulas: parsing, trace and branching semantics, countermodel search."""

from .formula import FALSE, And, Atom, Bottom, Box, Formula, G, Imp, Not, Or, parse, to_text
from .search import check_axiom_suite, countermodel_search
from .semantics import BranchModel, eval_branching, eval_trace, evidence_tree, monotonicity_violations

__all__ = [
    "FALSE", "And", "Atom", "Bottom", "Box", "Formula", "G", "Imp", "Not", "Or", "parse", "to_text",
    "check_axiom_suite", "countermodel_search",
    "BranchModel", "eval_branching", "eval_trace", "evidence_tree", "monotonicity_violations",
]
