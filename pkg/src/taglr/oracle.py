"""Brute-force TAG recognition, independent of the parse tables.

Two routes are provided.  ``derive_strings`` computes bounded yield sets as
a least fixpoint: every node gets the set of strings (or, on the spine of
an auxiliary tree, left/right string pairs around the foot) it can derive,
with adjunction at the node folded in.  Because every piece of a yield is a
contiguous part of the final string, pruning by length or by substring
membership keeps the sets finite and the result exact.

``derivations`` enumerates explicit derivation trees up to an adjunction
count and ``derived_yield`` splices the elementary trees together, which
gives a second, purely structural check of the adjunction operation.
"""

from __future__ import annotations

import itertools
import warnings
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Iterable, Iterator

from .grammar import EPSILON, FOOT, INTERIOR, ROOT, TERMINAL, Address, Grammar, Node, format_address

Yield = tuple[str, ...]


class OracleIncomplete(UserWarning):
    """Derivation enumeration hit its depth cap."""


def _spine(t) -> set[Address]:
    """Addresses dominating the foot (inclusive)."""
    if t.foot is None:
        return set()
    return {t.foot[:i] for i in range(len(t.foot) + 1)}


def _node_values(g: Grammar, keep: Callable[[Yield], bool], max_len: int):
    """Least fixpoint of the yield equations.

    Strings and both halves of pairs are pruned by ``keep``; a pair's halves
    are not adjacent in the final string, so only their total length is
    bounded.
    """
    spines = {t.name: _spine(t) for t in g}
    below: dict[tuple[str, Address], set] = {}
    full: dict[tuple[str, Address], set] = {}
    for t in g:
        for addr in t.nodes:
            below[t.name, addr] = set()
            full[t.name, addr] = set()

    def keep_pair(p):
        return len(p[0]) + len(p[1]) <= max_len and keep(p[0]) and keep(p[1])

    def product(parts):
        acc = {()}
        for part in parts:
            acc = {x + y for x in acc for y in part if keep(x + y)}
        return acc

    def children_product(t, addr):
        n = len(t.nodes[addr].children)
        parts = [full[t.name, addr + (i,)] for i in range(1, n + 1)]
        if addr not in spines[t.name]:
            return product(parts)
        k = next(i for i in range(n) if addr + (i + 1,) in spines[t.name])
        left, right = product(parts[:k]), product(parts[k + 1 :])
        pairs = {(x + pl, pr + y) for x in left for pl, pr in parts[k] for y in right}
        return {p for p in pairs if keep_pair(p)}

    def compute_below(t, addr):
        node = t.nodes[addr]
        if node.kind == TERMINAL:
            return {(node.label,)} if keep((node.label,)) else set()
        if node.kind == EPSILON:
            return {()}
        if node.kind == FOOT:
            return {((), ())}
        return children_product(t, addr)

    def compute_full(t, addr, inner):
        node = t.nodes[addr]
        if node.kind in (TERMINAL, EPSILON):
            return set(inner)
        out = set(inner)
        on_spine = addr in spines[t.name]
        for beta in g.adjoiners(t.name, addr):
            for l, r in full[beta, ROOT]:
                if on_spine:
                    out |= {p for p in ((l + il, ir + r) for il, ir in inner) if keep_pair(p)}
                else:
                    out |= {s for s in (l + x + r for x in inner) if keep(s)}
        return out

    order = [(t, addr) for t in g for addr in sorted(t.nodes, key=lambda a: (-len(a), a))]
    changed = True
    while changed:
        changed = False
        for t, addr in order:
            b = compute_below(t, addr)
            f = compute_full(t, addr, b)
            if b != below[t.name, addr] or f != full[t.name, addr]:
                below[t.name, addr] = b
                full[t.name, addr] = f
                changed = True
    return full


def _language(g: Grammar, keep, max_len: int) -> set[Yield]:
    full = _node_values(g, keep, max_len)
    out = set()
    for name in g.start_trees:
        out |= full[name, ROOT]
    return out


def derive_strings(g: Grammar, max_len: int) -> set[Yield]:
    """All token strings of length <= max_len in the language of ``g``."""
    if max_len < 0:
        raise ValueError("max_len must be non-negative")
    return _language(g, lambda s: len(s) <= max_len, max_len)


@lru_cache(maxsize=256)
def _accepts(g: Grammar, tokens: Yield) -> bool:
    n = len(tokens)
    pieces = {tokens[i:j] for i in range(n + 1) for j in range(i, n + 1)}
    return tokens in _language(g, pieces.__contains__, n)


def bf_accepts(g: Grammar, tokens: Iterable[str]) -> bool:
    tokens = tuple(tokens)
    if any(t not in g.terminals for t in tokens):
        return False
    return _accepts(g, tokens)


# -- explicit derivations ----------------------------------------------------


@dataclass(frozen=True)
class DerivationNode:
    tree: str
    adjunctions: tuple[tuple[Address, DerivationNode], ...] = field(default=())

    @property
    def size(self) -> int:
        return 1 + sum(d.size for _, d in self.adjunctions)

    def __str__(self):
        if not self.adjunctions:
            return self.tree
        inner = " ".join(f"{format_address(a)}:{d}" for a, d in self.adjunctions)
        return f"{self.tree}[{inner}]"


def derivations(g: Grammar, max_adjunctions: int, tree: str | None = None) -> Iterator[DerivationNode]:
    """Derivation trees with at most ``max_adjunctions`` adjunctions.

    With ``tree`` unset, derivations start from the start-label initial trees.
    """
    sites_cache = {}

    def sites(name):
        if name not in sites_cache:
            t = g[name]
            sites_cache[name] = [a for a in sorted(t.nodes) if (name, a) in g._adjoiners and g.adjoiners(name, a)]
        return sites_cache[name]

    @lru_cache(maxsize=None)
    def of_tree(name, budget) -> tuple[DerivationNode, ...]:
        out = []
        for choice in _site_choices(name, sites(name), budget):
            out.append(DerivationNode(name, choice))
        return tuple(out)

    def _site_choices(name, addrs, budget):
        if not addrs:
            yield ()
            return
        first, rest = addrs[0], addrs[1:]
        for tail in _site_choices(name, rest, budget):
            yield tail
        if budget == 0:
            return
        for beta in sorted(g.adjoiners(name, first)):
            for sub in of_tree(beta, budget - 1):
                used = sub.size
                for tail in _site_choices(name, rest, budget - used):
                    yield ((first, sub),) + tail

    roots = [tree] if tree is not None else g.start_trees
    for name in roots:
        yield from of_tree(name, max_adjunctions)


def _splice(g: Grammar, d: DerivationNode) -> Node:
    """The derived tree of ``d`` with every adjunction performed."""
    adjoined = dict(d.adjunctions)

    def rebuild(node, addr):
        if node.kind != INTERIOR:
            return node
        children = tuple(rebuild(c, addr + (i,)) for i, c in enumerate(node.children, 1))
        here = Node(node.kind, node.label, node.constraint, children)
        if addr in adjoined:
            assert adjoined[addr].tree in g.adjoiners(d.tree, addr), "adjunction violates a constraint"
            aux = _splice(g, adjoined[addr])
            return _replace_foot(aux, here)
        return here

    return rebuild(g[d.tree].root, ROOT)


def _replace_foot(aux: Node, subtree: Node) -> Node:
    if aux.kind == FOOT:
        return subtree
    if aux.kind != INTERIOR:
        return aux
    return Node(aux.kind, aux.label, aux.constraint, tuple(_replace_foot(c, subtree) for c in aux.children))


def derived_yield(g: Grammar, d: DerivationNode) -> Yield:
    out = []

    def walk(node):
        if node.kind == TERMINAL:
            out.append(node.label)
        elif node.kind == FOOT:
            raise ValueError("derived tree still has a foot")
        for c in node.children:
            walk(c)

    walk(_splice(g, d))
    return tuple(out)


def enumerate_strings(g: Grammar, max_len: int, max_adjunctions: int | None = None) -> set[Yield]:
    """Yields of explicit derivations, bounded by length.

    When every auxiliary tree yields a terminal, ``max_len`` adjunctions are
    enough.  Otherwise the count is capped at ``2 * max_len`` and an
    :class:`OracleIncomplete` warning is issued.
    """
    if max_adjunctions is None:
        max_adjunctions = max_len
        if any(not _has_terminal(t.root) for t in g.auxiliary_trees):
            max_adjunctions = 2 * max_len
            warnings.warn(
                "auxiliary tree without terminals; derivations capped at "
                f"{max_adjunctions} adjunctions (oracle incomplete)",
                OracleIncomplete,
                stacklevel=2,
            )
    out = set()
    for d in derivations(g, max_adjunctions):
        y = derived_yield(g, d)
        if len(y) <= max_len:
            out.add(y)
    return out


def _has_terminal(node: Node) -> bool:
    return node.kind == TERMINAL or any(_has_terminal(c) for c in node.children)


def all_strings(alphabet: Iterable[str], max_len: int, min_len: int = 0) -> Iterator[Yield]:
    """Every token string over ``alphabet`` with length in [min_len, max_len]."""
    alphabet = sorted(alphabet)
    for n in range(min_len, max_len + 1):
        yield from itertools.product(alphabet, repeat=n)
