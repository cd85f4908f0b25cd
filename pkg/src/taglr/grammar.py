"""Tree adjoining grammars: elementary trees, the text format, validation.

Grammars are written one declaration per line::

    # a^n e c^n
    start S
    initial alpha : (S "e")
    aux beta : (S:na "a" (S (S*:na) "c"))

Interior nodes are ``(LABEL[constraint] child...)``.  A child is a nested
node, a quoted terminal, an epsilon leaf ``()``, or the foot, written either
bare (``S*``) or parenthesized (``(S*:na)``).  Constraints are ``:na`` (no
adjunction) or ``:adj(name, ...)`` (only the listed auxiliary trees).  Nodes
without a constraint accept every auxiliary tree whose root label matches.

Addresses are Gorn addresses: tuples of 1-based child indices, ``()`` being
the root.
"""

from __future__ import annotations

import hashlib
import re
from dataclasses import dataclass, field, replace
from functools import cached_property
from typing import Iterator, Mapping

Address = tuple[int, ...]

ROOT: Address = ()

_NONE: frozenset[str] = frozenset()

INITIAL = "initial"
AUXILIARY = "aux"

# node kinds
INTERIOR = "interior"
TERMINAL = "terminal"
FOOT = "foot"
EPSILON = "epsilon"


class GrammarError(Exception):
    """Raised for malformed grammar text or an ill-formed tree."""

    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        self.message = message
        self.line = line
        self.column = column
        if line is not None:
            message = f"line {line}, column {column}: {message}"
        super().__init__(message)


def format_address(addr: Address) -> str:
    return ".".join(map(str, addr)) if addr else "ε"


def parse_address(text: str) -> Address:
    text = text.strip()
    if text in ("ε", "", "e", "eps", "root"):
        return ROOT
    try:
        path = tuple(int(part) for part in text.split("."))
    except ValueError:
        raise GrammarError(f"bad address {text!r}") from None
    if any(i < 1 for i in path):
        raise GrammarError(f"bad address {text!r}")
    return path


# -- constraints -------------------------------------------------------------


@dataclass(frozen=True)
class AnyMatching:
    def __str__(self):
        return ""


@dataclass(frozen=True)
class Null:
    def __str__(self):
        return ":na"


@dataclass(frozen=True)
class Selective:
    trees: frozenset[str]

    def __str__(self):
        return ":adj(" + ",".join(sorted(self.trees)) + ")"


AdjConstraint = AnyMatching | Null | Selective


# -- trees -------------------------------------------------------------------


@dataclass(frozen=True)
class Node:
    kind: str
    label: str | None = None  # terminal text for TERMINAL, None for EPSILON
    constraint: AdjConstraint = AnyMatching()
    children: tuple[Node, ...] = ()

    def render(self) -> str:
        if self.kind == TERMINAL:
            return f'"{self.label}"'
        if self.kind == EPSILON:
            return "()"
        if self.kind == FOOT:
            return f"({self.label}*:na)"
        inner = " ".join(child.render() for child in self.children)
        head = f"{self.label}{self.constraint}"
        return f"({head} {inner})" if inner else f"({head})"


@dataclass(frozen=True)
class ElementaryTree:
    name: str
    kind: str
    root: Node

    @cached_property
    def nodes(self) -> dict[Address, Node]:
        table = {}

        def walk(node, addr):
            table[addr] = node
            for i, child in enumerate(node.children, 1):
                walk(child, addr + (i,))

        walk(self.root, ROOT)
        return table

    @cached_property
    def foot(self) -> Address | None:
        feet = [a for a, n in self.nodes.items() if n.kind == FOOT]
        return feet[0] if feet else None

    @property
    def is_auxiliary(self) -> bool:
        return self.kind == AUXILIARY

    @property
    def root_label(self) -> str:
        return self.root.label

    def node(self, addr: Address) -> Node:
        try:
            return self.nodes[addr]
        except KeyError:
            raise KeyError(f"tree {self.name} has no node at {format_address(addr)}") from None

    def addresses(self) -> list[Address]:
        """Addresses in left-to-right preorder."""
        return sorted(self.nodes)

    def terminals(self) -> set[str]:
        return {n.label for n in self.nodes.values() if n.kind == TERMINAL}

    def render(self) -> str:
        return f"{self.kind} {self.name} : {self.root.render()}"

    def check(self) -> None:
        """Raise GrammarError if the tree breaks a structural invariant."""
        feet = [a for a, n in self.nodes.items() if n.kind == FOOT]
        if self.kind == INITIAL and feet:
            raise GrammarError(f"tree {self.name}: foot in initial tree")
        if self.kind == AUXILIARY:
            if not feet:
                raise GrammarError(f"tree {self.name}: auxiliary tree without a foot")
            if len(feet) > 1:
                raise GrammarError(f"tree {self.name}: multiple feet")
            if self.nodes[feet[0]].label != self.root.label:
                raise GrammarError(f"tree {self.name}: foot/root label mismatch")
        if self.root.kind != INTERIOR:
            raise GrammarError(f"tree {self.name}: root must be an interior node")


# -- grammar -----------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class Grammar:
    """An immutable TAG.  ``trees`` must not be mutated after construction."""

    start: str
    trees: Mapping[str, ElementaryTree]
    version: int = 0

    def __eq__(self, other):
        if not isinstance(other, Grammar):
            return NotImplemented
        return self.start == other.start and dict(self.trees) == dict(other.trees)

    def __hash__(self):
        return hash(self.text)

    def __getitem__(self, name: str) -> ElementaryTree:
        return self.trees[name]

    def __contains__(self, name) -> bool:
        return name in self.trees

    def __iter__(self) -> Iterator[ElementaryTree]:
        return iter(self.trees.values())

    @cached_property
    def text(self) -> str:
        """Canonical printed form; tree order follows declaration order."""
        lines = [f"start {self.start}"]
        lines += [t.render() for t in self.trees.values()]
        return "\n".join(lines) + "\n"

    @cached_property
    def digest(self) -> str:
        return hashlib.sha256(self.text.encode("utf-8")).hexdigest()

    @property
    def initial_trees(self) -> list[ElementaryTree]:
        return [t for t in self.trees.values() if t.kind == INITIAL]

    @property
    def auxiliary_trees(self) -> list[ElementaryTree]:
        return [t for t in self.trees.values() if t.kind == AUXILIARY]

    @cached_property
    def start_trees(self) -> list[str]:
        return sorted(t.name for t in self.initial_trees if t.root_label == self.start)

    @cached_property
    def terminals(self) -> set[str]:
        out = set()
        for t in self.trees.values():
            out |= t.terminals()
        return out

    def adjoiners(self, tree: str, addr: Address) -> frozenset[str]:
        """Auxiliary trees that may adjoin at node ``addr`` of ``tree``."""
        return self._adjoiners.get((tree, addr), _NONE)

    @cached_property
    def _adjoiners(self) -> dict[tuple[str, Address], frozenset[str]]:
        by_label: dict[str, set[str]] = {}
        for aux in self.auxiliary_trees:
            by_label.setdefault(aux.root_label, set()).add(aux.name)
        table = {}
        for t in self.trees.values():
            for addr, node in t.nodes.items():
                if node.kind in (TERMINAL, EPSILON):
                    continue
                if node.kind == FOOT or isinstance(node.constraint, Null):
                    table[t.name, addr] = frozenset()
                    continue
                matching = by_label.get(node.label, set())
                if isinstance(node.constraint, Selective):
                    matching = matching & node.constraint.trees
                table[t.name, addr] = frozenset(matching)
        return table

    def node_adjoiners(self, tree: str, addr: Address) -> frozenset[str]:
        """Like adjoiners, but raise on unknown or non-adjoinable nodes."""
        if tree not in self.trees:
            raise KeyError(f"unknown tree {tree!r}")
        node = self.trees[tree].node(addr)
        if node.kind in (TERMINAL, EPSILON):
            raise KeyError(f"{tree}@{format_address(addr)} is a {node.kind} leaf")
        return self._adjoiners.get((tree, addr), _NONE)

    @cached_property
    def hosts(self) -> dict[str, list[tuple[str, Address]]]:
        """For each auxiliary tree, the nodes it may adjoin at."""
        out: dict[str, list[tuple[str, Address]]] = {a.name: [] for a in self.auxiliary_trees}
        for (tree, addr), names in sorted(self._adjoiners.items()):
            for name in names:
                out[name].append((tree, addr))
        return out

    def with_tree(self, tree: ElementaryTree) -> Grammar:
        if tree.name in self.trees:
            raise GrammarError(f"duplicate tree name {tree.name!r}")
        trees = dict(self.trees)
        trees[tree.name] = tree
        return replace(self, trees=trees, version=self.version + 1)

    def without_tree(self, name: str) -> Grammar:
        if name not in self.trees:
            raise GrammarError(f"no tree named {name!r}")
        trees = {k: v for k, v in self.trees.items() if k != name}
        return replace(self, trees=trees, version=self.version + 1)


def validate(g: Grammar) -> list[str]:
    """Return a list of findings; empty means the grammar is well formed."""
    findings = []
    for t in g.trees.values():
        try:
            t.check()
        except GrammarError as exc:
            findings.append(exc.message)
        for addr, node in t.nodes.items():
            if not isinstance(node.constraint, Selective):
                continue
            where = f"{t.name}@{format_address(addr)}"
            for name in sorted(node.constraint.trees):
                if name not in g.trees:
                    findings.append(f"unresolved selective constraint: {where} names {name!r}")
                elif not g.trees[name].is_auxiliary:
                    findings.append(f"selective constraint at {where} names initial tree {name!r}")
                elif g.trees[name].root_label != node.label:
                    findings.append(
                        f"selective constraint at {where} names {name!r} with root label "
                        f"{g.trees[name].root_label!r}"
                    )
    if not g.start_trees:
        findings.append(f"no start-compatible initial tree (start label {g.start!r})")
    return findings


# -- text format -------------------------------------------------------------

_TOKEN = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<string>"[^"\s()]+")
  | (?P<lparen>\()
  | (?P<rparen>\))
  | (?P<colon>:)
  | (?P<word>[^\s()":]+(?::na|:adj\([^()\s]*\))?)
    """,
    re.VERBOSE,
)

_NAME = re.compile(r"[^\W\d][\w'-]*\Z")
_LABEL = re.compile(r"""[^\s()"*:,]+\Z""")


@dataclass
class _Tok:
    kind: str
    text: str
    column: int


def _tokenize(line: str, lineno: int) -> list[_Tok]:
    toks = []
    pos = 0
    while pos < len(line):
        m = _TOKEN.match(line, pos)
        if m is None:
            raise GrammarError(f"unexpected character {line[pos]!r}", lineno, pos + 1)
        if m.lastgroup != "ws":
            toks.append(_Tok(m.lastgroup, m.group(), pos + 1))
        pos = m.end()
    return toks


def _split_constraint(word: str, lineno: int, column: int) -> tuple[str, AdjConstraint]:
    if word.endswith(":na"):
        return word[:-3], Null()
    m = re.fullmatch(r"(.*):adj\(([^()]*)\)", word)
    if m:
        names = [n.strip() for n in m.group(2).split(",") if n.strip()]
        if not names:
            raise GrammarError("empty adj() constraint", lineno, column)
        for n in names:
            if not _NAME.match(n):
                raise GrammarError(f"bad tree name {n!r} in constraint", lineno, column)
        return m.group(1), Selective(frozenset(names))
    return word, AnyMatching()


class _TreeReader:
    def __init__(self, toks: list[_Tok], lineno: int, end_column: int):
        self.toks = toks
        self.i = 0
        self.lineno = lineno
        self.end_column = end_column

    def peek(self) -> _Tok | None:
        return self.toks[self.i] if self.i < len(self.toks) else None

    def next(self, what: str) -> _Tok:
        tok = self.peek()
        if tok is None:
            raise GrammarError(f"unexpected end of line, expected {what}", self.lineno, self.end_column)
        self.i += 1
        return tok

    def fail(self, tok: _Tok, message: str):
        raise GrammarError(message, self.lineno, tok.column)

    def label(self, tok: _Tok) -> tuple[str, AdjConstraint, bool]:
        if tok.kind != "word":
            self.fail(tok, f"expected a node label, got {tok.text!r}")
        label, constraint = _split_constraint(tok.text, self.lineno, tok.column)
        foot = label.endswith("*")
        if foot:
            label = label[:-1]
        if not _LABEL.match(label):
            self.fail(tok, f"bad node label {label!r}")
        return label, constraint, foot

    def foot(self, tok: _Tok, label: str, constraint: AdjConstraint) -> Node:
        if not isinstance(constraint, (Null, AnyMatching)):
            self.fail(tok, "a foot node only admits the :na constraint")
        return Node(FOOT, label, Null())

    def node(self) -> Node:
        """Parse a node whose opening parenthesis was already consumed."""
        tok = self.next("a node label")
        if tok.kind == "rparen":
            return Node(EPSILON)
        label, constraint, foot = self.label(tok)
        if foot:
            close = self.next("')'")
            if close.kind != "rparen":
                self.fail(close, "a foot node cannot have children")
            return self.foot(tok, label, constraint)
        children = []
        while True:
            tok = self.next("')'")
            if tok.kind == "rparen":
                break
            children.append(self.child(tok))
        if not children:
            self.fail(tok, f"interior node {label!r} has no children (use () for epsilon)")
        return Node(INTERIOR, label, constraint, tuple(children))

    def child(self, tok: _Tok) -> Node:
        if tok.kind == "lparen":
            return self.node()
        if tok.kind == "string":
            return Node(TERMINAL, tok.text[1:-1])
        if tok.kind == "word":
            label, constraint, foot = self.label(tok)
            if not foot:
                self.fail(tok, f"bare label {label!r} is neither a terminal nor a foot")
            return self.foot(tok, label, constraint)
        self.fail(tok, f"unexpected {tok.text!r}")


def parse_tree_decl(line: str, lineno: int = 1) -> ElementaryTree:
    """Parse a single ``initial``/``aux`` declaration."""
    toks = _tokenize(line, lineno)
    if len(toks) < 4:
        raise GrammarError("incomplete tree declaration", lineno, 1)
    kind_tok, name_tok, colon, open_tok = toks[:4]
    if kind_tok.text not in (INITIAL, AUXILIARY):
        raise GrammarError(f"expected 'initial' or 'aux', got {kind_tok.text!r}", lineno, kind_tok.column)
    if name_tok.kind != "word" or not _NAME.match(name_tok.text):
        raise GrammarError(f"bad tree name {name_tok.text!r}", lineno, name_tok.column)
    if colon.kind != "colon":
        raise GrammarError("expected ':' after tree name", lineno, colon.column)
    if open_tok.kind != "lparen":
        raise GrammarError("expected '(' to open the tree", lineno, open_tok.column)
    reader = _TreeReader(toks[4:], lineno, len(line) + 1)
    root = reader.node()
    if reader.peek() is not None:
        reader.fail(reader.peek(), "trailing input after tree")
    if root.kind != INTERIOR:
        raise GrammarError("tree root must be an interior node", lineno, open_tok.column)
    tree = ElementaryTree(name_tok.text, kind_tok.text, root)
    try:
        tree.check()
    except GrammarError as exc:
        raise GrammarError(exc.message, lineno, kind_tok.column) from None
    return tree


def parse_grammar_text(text: str) -> Grammar:
    start = None
    trees: dict[str, ElementaryTree] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        indent = len(raw) - len(raw.lstrip())
        head = line.split(None, 1)[0]
        if head == "start":
            parts = line.split()
            if len(parts) != 2 or not _LABEL.match(parts[1]):
                raise GrammarError("expected 'start LABEL'", lineno, indent + 1)
            if start is not None:
                raise GrammarError("duplicate start declaration", lineno, indent + 1)
            start = parts[1]
        elif head in (INITIAL, AUXILIARY):
            try:
                tree = parse_tree_decl(line, lineno)
            except GrammarError as exc:
                col = exc.column + indent if exc.column is not None else None
                raise GrammarError(exc.message, lineno, col) from None
            if tree.name in trees:
                raise GrammarError(f"duplicate tree name {tree.name!r}", lineno, indent + 1)
            trees[tree.name] = tree
        else:
            raise GrammarError(f"unknown declaration {head!r}", lineno, indent + 1)
    if start is None:
        raise GrammarError("missing start declaration")
    return Grammar(start, trees)


def print_grammar(g: Grammar) -> str:
    return g.text


def load_grammar(path) -> Grammar:
    with open(path, encoding="utf-8") as fh:
        return parse_grammar_text(fh.read())
