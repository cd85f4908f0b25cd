"""LR parsing for Tree Adjoining Grammars.

The pieces, bottom up:

* :mod:`taglr.grammar` -- elementary trees, constraints, the text format.
* :mod:`taglr.items` -- dotted-tree items, closure, transitions, actions.
* :mod:`taglr.table` -- the interned automaton and the eager builder.
* :mod:`taglr.lazy` -- on-demand expansion and incremental grammar edits.
* :mod:`taglr.engine` -- the backtracking parse driver.
* :mod:`taglr.oracle` -- brute-force recognition for cross-checking.
* :mod:`taglr.snapshot`, :mod:`taglr.dot`, :mod:`taglr.workbench`,
  :mod:`taglr.cli` -- persistence, Graphviz export, REPL and command line.
"""

from .dot import export_dot
from .engine import InternalInconsistency, ParseOutcome, StepBudgetExceeded, parse, recognizes
from .grammar import (
    ElementaryTree,
    Grammar,
    GrammarError,
    load_grammar,
    parse_grammar_text,
    parse_tree_decl,
    print_grammar,
    validate,
)
from .items import DotPos, DottedItem, actions, advance_dot, close, successors
from .lazy import (
    AddAuxiliary,
    AddInitial,
    EditError,
    EditReport,
    Remove,
    apply_edit,
    build_lazy,
    ensure_expanded,
    equivalent,
    expand_all,
    purge_unreachable,
)
from .oracle import bf_accepts, derive_strings
from .table import Fsa, build_eager, intern_kernel

__version__ = "0.1.0"

__all__ = [
    "AddAuxiliary",
    "AddInitial",
    "DotPos",
    "DottedItem",
    "EditError",
    "EditReport",
    "ElementaryTree",
    "Fsa",
    "Grammar",
    "GrammarError",
    "InternalInconsistency",
    "ParseOutcome",
    "Remove",
    "StepBudgetExceeded",
    "actions",
    "advance_dot",
    "apply_edit",
    "bf_accepts",
    "build_eager",
    "build_lazy",
    "close",
    "derive_strings",
    "ensure_expanded",
    "equivalent",
    "expand_all",
    "export_dot",
    "intern_kernel",
    "load_grammar",
    "parse",
    "parse_grammar_text",
    "parse_tree_decl",
    "print_grammar",
    "purge_unreachable",
    "recognizes",
    "successors",
    "validate",
]
