"""Dotted-tree items and the closure/transition/action functions over them.

An item places a dot at one of four positions around a node: left-above
(LA), left-below (LB), right-below (RB) or right-above (RA).  The star set
records nodes of the same tree where an adjunction is in progress or done.

Walking a tree left to right visits, for each node, LA then (for interior
nodes) LB, the children, RB, and finally RA.  Between LA and LB, and again
between RB and RA, an auxiliary tree may be adjoined.
"""

from __future__ import annotations

from enum import IntEnum
from typing import Iterable, NamedTuple

from .grammar import EPSILON, FOOT, INTERIOR, ROOT, TERMINAL, Address, Grammar, format_address


class DotPos(IntEnum):
    LA = 0
    LB = 1
    RB = 2
    RA = 3


LA, LB, RB, RA = DotPos.LA, DotPos.LB, DotPos.RB, DotPos.RA

NO_STARS: frozenset[Address] = frozenset()


class DottedItem(NamedTuple):
    tree: str
    addr: Address
    pos: DotPos
    stars: frozenset[Address] = NO_STARS

    def sort_key(self):
        return (self.tree, self.addr, int(self.pos), sorted(self.stars))

    def __str__(self):
        stars = ",".join(format_address(a) for a in sorted(self.stars))
        return f"<{self.tree},{format_address(self.addr)},{self.pos.name},{{{stars}}}>"


def sort_items(items: Iterable[DottedItem]) -> list[DottedItem]:
    return sorted(items, key=DottedItem.sort_key)


# -- transition labels -------------------------------------------------------


class Term(NamedTuple):
    symbol: str

    def __str__(self):
        return self.symbol


class FootLabel(NamedTuple):
    def __str__(self):
        return "foot"


class Right(NamedTuple):
    """Completed adjunction of ``tree`` at node ``host_addr`` of ``host``."""

    tree: str
    host: str
    host_addr: Address

    def __str__(self):
        return f"right({self.tree}@{self.host}:{format_address(self.host_addr)})"


Foot = FootLabel()

TransLabel = Term | FootLabel | Right


def label_key(label: TransLabel):
    if isinstance(label, Term):
        return (0, label.symbol)
    if isinstance(label, FootLabel):
        return (1, "")
    return (2, label.tree, label.host, label.host_addr)


# -- actions -----------------------------------------------------------------


class Shift(NamedTuple):
    symbol: str

    def __str__(self):
        return f"shift {self.symbol}"


class ResumeRight(NamedTuple):
    item: DottedItem

    def __str__(self):
        return f"resume {self.item}"


class ReduceRoot(NamedTuple):
    item: DottedItem

    def __str__(self):
        return f"reduce {self.item}"


class Accept(NamedTuple):
    item: DottedItem

    def __str__(self):
        return f"accept {self.item}"


Action = Shift | ResumeRight | ReduceRoot | Accept

_ACTION_RANK = {Shift: 0, ResumeRight: 1, ReduceRoot: 2, Accept: 3}


def action_key(action: Action):
    rank = _ACTION_RANK[type(action)]
    if isinstance(action, Shift):
        return (rank, action.symbol, ())
    return (rank, "", action.item.sort_key())


# -- dot movement ------------------------------------------------------------


def advance_dot(g: Grammar, tree: str, addr: Address, pos: DotPos):
    """Next dot position in the left-to-right walk, or None at the end.

    Only the moves that leave a node are produced here: LB descends to the
    first child, RA goes to the next sibling or up to the parent's RB.
    """
    t = g[tree]
    node = t.node(addr)
    if pos == LB:
        if node.kind != INTERIOR:
            raise ValueError(f"{tree}@{format_address(addr)} has no children")
        return addr + (1,), LA
    if pos == RA:
        if addr == ROOT:
            return None
        parent = addr[:-1]
        if addr[-1] < len(t.node(parent).children):
            return parent + (addr[-1] + 1,), LA
        return parent, RB
    raise ValueError(f"advance_dot is undefined at {pos.name}")


def close(kernel: Iterable[DottedItem], g: Grammar) -> frozenset[DottedItem]:
    """Closure of a set of items under prediction, completion and dot moves."""
    result = set(kernel)
    todo = list(result)

    def add(item):
        if item not in result:
            result.add(item)
            todo.append(item)

    while todo:
        item = todo.pop()
        tree, addr, pos, stars = item
        t = g[tree]
        node = t.nodes[addr]
        if pos == LA:
            if node.kind == TERMINAL:
                continue
            for beta in g.adjoiners(tree, addr):
                add(DottedItem(beta, ROOT, LA, NO_STARS))
            if node.kind == EPSILON:
                add(DottedItem(tree, addr, RA, stars))
            else:
                add(DottedItem(tree, addr, LB, stars))
        elif pos == LB:
            if node.kind == INTERIOR:
                add(DottedItem(tree, addr + (1,), LA, stars))
            elif node.kind == FOOT:
                # left completion: the material under the foot is some host subtree
                for host, host_addr in g.hosts[tree]:
                    add(DottedItem(host, host_addr, LB, frozenset((host_addr,))))
        elif pos == RA:
            nxt = advance_dot(g, tree, addr, RA)
            if nxt is not None:
                add(DottedItem(tree, nxt[0], nxt[1], stars))
        elif addr not in stars:
            add(DottedItem(tree, addr, RA, stars))
    return frozenset(result)


def successors(closed: Iterable[DottedItem], g: Grammar) -> dict[TransLabel, frozenset[DottedItem]]:
    """Kernels of the states reached from a closed item set, by label."""
    out: dict[TransLabel, set[DottedItem]] = {}
    for tree, addr, pos, stars in closed:
        node = g[tree].nodes[addr]
        if pos == LA:
            if node.kind == TERMINAL:
                out.setdefault(Term(node.label), set()).add(DottedItem(tree, addr, RA, stars))
            elif node.kind != EPSILON:
                for beta in g.adjoiners(tree, addr):
                    out.setdefault(Right(beta, tree, addr), set()).add(DottedItem(tree, addr, RA, stars | {addr}))
        elif pos == LB and node.kind == FOOT:
            out.setdefault(Foot, set()).add(DottedItem(tree, addr, RB, stars))
    return {label: frozenset(items) for label, items in sorted(out.items(), key=lambda kv: label_key(kv[0]))}


def actions(closed: Iterable[DottedItem], g: Grammar) -> tuple[tuple[Action, ...], bool]:
    """Parse actions of a closed state and whether they conflict."""
    acts: set[Action] = set()
    for item in closed:
        tree, addr, pos, stars = item
        node = g[tree].nodes[addr]
        if pos == LA and node.kind == TERMINAL:
            acts.add(Shift(node.label))
        elif pos == RB and addr in stars:
            acts.add(ResumeRight(item))
        elif pos == RA and addr == ROOT:
            if g[tree].is_auxiliary:
                acts.add(ReduceRoot(item))
            else:
                acts.add(Accept(item))
    ordered = tuple(sorted(acts, key=action_key))
    return ordered, is_conflict(ordered)


def is_conflict(acts: Iterable[Action]) -> bool:
    acts = list(acts)
    others = [a for a in acts if not isinstance(a, Shift)]
    return len(others) > 1 or (len(others) == 1 and len(others) < len(acts))
