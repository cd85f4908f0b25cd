"""The parse-table automaton: interned states, expansion and eager building."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field

from .grammar import ROOT, Grammar
from .items import (
    LA,
    Accept,
    Action,
    DottedItem,
    TransLabel,
    actions,
    close,
    is_conflict,
    label_key,
    sort_items,
    successors,
)

KERNEL_FORM = "kernel"
EXPANDED = "expanded"


@dataclass(eq=True)
class State:
    id: int
    kernel: frozenset[DottedItem]
    closure: frozenset[DottedItem] | None = None
    transitions: dict[TransLabel, int] = field(default_factory=dict)
    actions: tuple[Action, ...] = ()
    version: int | None = None

    @property
    def status(self) -> str:
        return KERNEL_FORM if self.closure is None else EXPANDED

    @property
    def expanded(self) -> bool:
        return self.closure is not None

    @property
    def conflict(self) -> bool:
        return is_conflict(self.actions)

    @property
    def accepting(self) -> bool:
        return any(isinstance(a, Accept) for a in self.actions)

    def items(self) -> frozenset[DottedItem]:
        return self.kernel if self.closure is None else self.closure

    def rekernel(self) -> None:
        self.closure = None
        self.transitions = {}
        self.actions = ()
        self.version = None

    def describe(self) -> str:
        lines = [f"state {self.id} ({self.status})"]
        for item in sort_items(self.items()):
            mark = " " if item in self.kernel else "+"
            lines.append(f"  {mark} {item}")
        for label, target in sorted(self.transitions.items(), key=lambda kv: label_key(kv[0])):
            lines.append(f"  {label} -> {target}")
        for act in self.actions:
            lines.append(f"  [{act}]")
        return "\n".join(lines)


class Fsa:
    """States keyed by id plus an index from kernel sets to ids.

    Kernels are interned: no two states ever share a kernel, including
    states that have become unreachable after an edit.
    """

    start = 0

    def __init__(self, version: int = 0):
        self.states: dict[int, State] = {}
        self.by_kernel: dict[frozenset[DottedItem], int] = {}
        self.version = version
        self.next_id = 0

    def __eq__(self, other):
        if not isinstance(other, Fsa):
            return NotImplemented
        return self.states == other.states

    def __len__(self):
        return len(self.states)

    def __getitem__(self, sid: int) -> State:
        return self.states[sid]

    def __contains__(self, sid) -> bool:
        return sid in self.states

    def copy(self) -> Fsa:
        new = Fsa(self.version)
        new.next_id = self.next_id
        for sid, s in self.states.items():
            new.states[sid] = State(s.id, s.kernel, s.closure, dict(s.transitions), s.actions, s.version)
        new.by_kernel = dict(self.by_kernel)
        return new

    def add_state(self, kernel: frozenset[DottedItem], sid: int | None = None) -> State:
        if sid is None:
            sid = self.next_id
        self.next_id = max(self.next_id, sid + 1)
        state = State(sid, kernel)
        self.states[sid] = state
        self.by_kernel[kernel] = sid
        return state

    def delete_state(self, sid: int) -> None:
        state = self.states.pop(sid)
        if self.by_kernel.get(state.kernel) == sid:
            del self.by_kernel[state.kernel]

    def reachable(self) -> set[int]:
        seen = {self.start}
        todo = [self.start]
        while todo:
            for target in self.states[todo.pop()].transitions.values():
                if target not in seen:
                    seen.add(target)
                    todo.append(target)
        return seen

    def conflicts(self) -> list[int]:
        return [sid for sid, s in sorted(self.states.items()) if s.conflict]

    def describe(self) -> str:
        return "\n".join(s.describe() for _, s in sorted(self.states.items()))


def start_kernel(g: Grammar) -> frozenset[DottedItem]:
    return frozenset(DottedItem(name, ROOT, LA) for name in g.start_trees)


def intern_kernel(fsa: Fsa, kernel: frozenset[DottedItem]) -> tuple[int, bool]:
    """Id of the state with this kernel, creating a kernel-form state if new."""
    if not kernel:
        raise ValueError("cannot intern an empty kernel")
    kernel = frozenset(kernel)
    sid = fsa.by_kernel.get(kernel)
    if sid is not None:
        return sid, False
    return fsa.add_state(kernel).id, True


def expand_state(fsa: Fsa, g: Grammar, sid: int) -> tuple[int, list[int], list[int]]:
    """Close a state and intern its successors.

    Returns (items added by closure, created successor ids, reused ids).
    """
    state = fsa.states[sid]
    closed = close(state.kernel, g)
    created, reused = [], []
    transitions = {}
    for label, kernel in successors(closed, g).items():
        target, new = intern_kernel(fsa, kernel)
        transitions[label] = target
        (created if new else reused).append(target)
    state.closure = closed
    state.transitions = transitions
    state.actions, _ = actions(closed, g)
    state.version = g.version
    return len(closed) - len(state.kernel), created, reused


def build_eager(g: Grammar) -> Fsa:
    """Expand every state reachable from state 0.

    States are numbered in breadth-first order with label-sorted edges, so
    the result does not depend on anything but the grammar.
    """
    fsa = Fsa(g.version)
    fsa.add_state(start_kernel(g))
    queue = deque([fsa.start])
    while queue:
        sid = queue.popleft()
        _, created, _ = expand_state(fsa, g, sid)
        queue.extend(created)
    return fsa
