"""LR-style driver for TAG parse tables.

The embedded pushdown storage (a sequence of stacks) is kept as one stack
of entries.  Each entry holds the state pushed and a label saying what it
stands for: a shifted terminal, a completed adjunction (``RightMark``), or
the point where the parser resumed an auxiliary tree after its foot
(``FootMark``).  A FootMark remembers how many entries below it make up the
material under the foot, so reduce-root can excise an auxiliary tree
together with the host material it wraps.

Conflicting actions are explored depth first with backtracking.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from typing import Iterable, NamedTuple, Sequence

from .grammar import EPSILON, FOOT, INTERIOR, TERMINAL, Address, Grammar
from .items import Accept, Foot, ReduceRoot, ResumeRight, Right, Shift, Term
from .lazy import ExpansionRecord, ensure_expanded
from .table import Fsa

DEFAULT_STEP_BUDGET = 1_000_000


class InternalInconsistency(RuntimeError):
    """The stack does not match what the table says it should hold."""


class StepBudgetExceeded(RuntimeError):
    pass


class FootInfo(NamedTuple):
    """The host node whose subtree sits under an auxiliary tree's foot.

    ``inner`` is the same information for the host's own tree when the host
    node dominates that tree's foot, and None otherwise.
    """

    host: str
    host_addr: Address
    inner: FootInfo | None = None


class FootMark(NamedTuple):
    k: int
    info: FootInfo | None = None

    def __str__(self):
        return f"foot(k={self.k})"


class RightMark(NamedTuple):
    tree: str
    # foot information of the host tree, when this adjunction covers its foot
    carried: FootInfo | None = None

    def __str__(self):
        return f"right({self.tree})"


class StackEntry(NamedTuple):
    state: int
    label: Term | FootMark | RightMark


class Frame(NamedTuple):
    """Persistent stack cell; ``below`` is None at the implicit bottom.

    ``mass`` counts the entries at or below this one that are not FootMarks.
    """

    entry: StackEntry
    below: Frame | None
    height: int
    mass: int


def push(frame: Frame | None, state: int, label) -> Frame:
    weight = 0 if isinstance(label, FootMark) else 1
    if frame is None:
        return Frame(StackEntry(state, label), None, 1, weight)
    return Frame(StackEntry(state, label), frame, frame.height + 1, frame.mass + weight)


def entries(frame: Frame | None) -> list[StackEntry]:
    """Stack contents bottom to top."""
    out = []
    while frame is not None:
        out.append(frame.entry)
        frame = frame.below
    return out[::-1]


def top_state(frame: Frame | None) -> int:
    return 0 if frame is None else frame.entry.state


@dataclass(frozen=True)
class Config:
    stack: Frame | None
    cursor: int
    path: tuple | None = None  # linked (event, previous) pairs on this branch
    open: int = 0  # auxiliary trees resumed but not yet reduced

    @property
    def depth(self) -> int:
        return 0 if self.stack is None else self.stack.height

    @property
    def mass(self) -> int:
        return 0 if self.stack is None else self.stack.mass

    @property
    def state(self) -> int:
        return top_state(self.stack)

    def history(self) -> list[tuple]:
        out = []
        node = self.path
        while node is not None:
            out.append(node[0])
            node = node[1]
        return out[::-1]


# -- event walks -------------------------------------------------------------

_events_cache: dict = {}


def _events(g: Grammar, tree: str, addr: Address, stars: frozenset, include_self: bool):
    """What the stack holds for a tree part, topmost first."""
    key = (g.digest, tree, addr, stars, include_self)
    cached = _events_cache.get(key)
    if cached is not None:
        return cached
    t = g[tree]
    foot = t.foot
    out = []

    def visit(a):
        node = t.nodes[a]
        if a in stars:
            spine = foot is not None and foot[: len(a)] == a
            out.append(("right", a, spine))
        elif node.kind == TERMINAL:
            out.append(("term", node.label, False))
        elif node.kind == FOOT:
            out.append(("foot", a, True))
        elif node.kind == INTERIOR:
            for i in range(1, len(node.children) + 1):
                visit(a + (i,))

    if include_self:
        visit(addr)
    else:
        for i in range(1, len(t.nodes[addr].children) + 1):
            visit(addr + (i,))
    out.reverse()
    if len(_events_cache) > 100_000:
        _events_cache.clear()
    _events_cache[key] = out
    return out


def _walk(g: Grammar, frame: Frame | None, tree: str, addr: Address, stars, include_self: bool):
    """Pop the entries for a tree part.

    Returns (entries popped, frame below them, foot information of ``tree``
    if its foot lies in the part).
    """
    count = 0
    info = None
    for kind, arg, spine in _events(g, tree, addr, stars, include_self):
        if frame is None:
            raise InternalInconsistency(f"stack underflow walking {tree}")
        label = frame.entry.label
        if kind == "term":
            if not isinstance(label, Term) or label.symbol != arg:
                raise InternalInconsistency(f"expected terminal {arg!r} in {tree}, found {label}")
        elif kind == "right":
            if not isinstance(label, RightMark) or label.tree not in g.adjoiners(tree, arg):
                raise InternalInconsistency(f"expected an adjunction at {tree}@{arg}, found {label}")
            if spine:
                info = label.carried
        else:
            if not isinstance(label, FootMark):
                raise InternalInconsistency(f"expected the foot of {tree}, found {label}")
            info = label.info
            for _ in range(label.k):
                frame = frame.below
                count += 1
                if frame is None:
                    raise InternalInconsistency(f"stack underflow under the foot of {tree}")
        frame = frame.below
        count += 1
    return count, frame, info


def measure_segment(config: Config, g: Grammar, tree: str, addr: Address, stars) -> int:
    """Number of entries holding the material strictly below ``addr``."""
    count, _, _ = _walk(g, config.stack, tree, addr, frozenset(stars), include_self=False)
    return count


def _below(frame: Frame | None, k: int) -> Frame | None:
    for _ in range(k):
        frame = frame.below
    return frame


# -- driving -----------------------------------------------------------------


@dataclass
class Stats:
    steps: int = 0
    expansions: int = 0
    backtracks: int = 0
    max_depth: int = 0


@dataclass
class ParseOutcome:
    accepted: bool
    stats: Stats
    trace: list[str] = field(default_factory=list)
    path: list[tuple] = field(default_factory=list)
    records: list[ExpansionRecord] = field(default_factory=list)
    visited: set[int] = field(default_factory=set)
    diagnostic: str = ""

    @property
    def verdict(self) -> str:
        return "accept" if self.accepted else "reject"

    def foot_counts(self) -> list[int]:
        """FootMark counts pushed on the accepting branch, in order."""
        return [e[1] for e in self.path if e[0] == "resume"]


class _Driver:
    def __init__(self, fsa: Fsa, g: Grammar, tokens: Sequence[str], trace: bool, budget: int):
        self.fsa = fsa
        self.g = g
        self.tokens = tuple(tokens)
        self.want_trace = trace
        self.budget = budget
        self.stats = Stats()
        self.trace: list[str] = []
        self.records: list[ExpansionRecord] = []
        self.visited: set[int] = set()
        self.bounded = all(t.terminals() for t in g.auxiliary_trees)

    def state(self, sid: int):
        rec = ensure_expanded(self.fsa, self.g, sid)
        if rec.expanded:
            self.stats.expansions += 1
            self.records.append(rec)
        self.visited.add(sid)
        return self.fsa.states[sid]

    def note(self, event: tuple, config: Config) -> Config:
        self.stats.steps += 1
        if self.stats.steps > self.budget:
            suspects = sorted(t.name for t in self.g.auxiliary_trees if not (t.terminals()))
            hint = f" (auxiliary trees without terminals: {', '.join(suspects)})" if suspects else ""
            raise StepBudgetExceeded(f"step budget of {self.budget} exceeded{hint}")
        self.stats.max_depth = max(self.stats.max_depth, config.depth)
        if self.want_trace:
            kind = event[0]
            if kind == "shift":
                what = f"shift {event[1]}"
            elif kind == "resume":
                what = f"resume k={event[1]}"
            elif kind == "reduce":
                what = f"reduce {event[1]}"
            else:
                what = "accept"
            self.trace.append(
                f"step={self.stats.steps} action={what} pos={config.cursor} "
                f"depth={config.depth} state={config.state}"
            )
        return Config(config.stack, config.cursor, (event, config.path), config.open)

    def successors(self, config: Config) -> tuple[list[Config], Config | None]:
        """Configs reachable in one action, and an accepting config if any."""
        g = self.g
        state = self.state(config.state)
        out = []
        accepted = None
        nxt = self.tokens[config.cursor] if config.cursor < len(self.tokens) else None
        for action in state.actions:
            if isinstance(action, Shift):
                if action.symbol != nxt:
                    continue
                target = state.transitions[Term(nxt)]
                new = Config(push(config.stack, target, Term(nxt)), config.cursor + 1, config.path, config.open)
                out.append(self.note(("shift", nxt), new))
            elif isinstance(action, ResumeRight):
                if self.bounded and config.open >= config.mass + len(self.tokens) - config.cursor:
                    # every open auxiliary tree owns a terminal, on the stack or still unread
                    continue
                tree, addr, _, stars = action.item
                k, _, inner = _walk(g, config.stack, tree, addr, stars, include_self=False)
                predictor = self.state(top_state(_below(config.stack, k)))
                if Foot not in predictor.transitions:
                    raise InternalInconsistency(
                        f"no foot transition at state {predictor.id} resuming {action.item}"
                    )
                target = predictor.transitions[Foot]
                mark = FootMark(k, FootInfo(tree, addr, inner))
                new = Config(push(config.stack, target, mark), config.cursor, config.path, config.open + 1)
                out.append(self.note(("resume", k, tree), new))
            elif isinstance(action, ReduceRoot):
                tree, addr, _, stars = action.item
                _, frame, info = _walk(g, config.stack, tree, addr, stars, include_self=True)
                if info is None:
                    raise InternalInconsistency(f"reducing {tree} without a recorded foot host")
                exposed = self.state(top_state(frame))
                label = Right(tree, info.host, info.host_addr)
                if label not in exposed.transitions:
                    # the material under the foot was parsed for a host not predicted here
                    continue
                mark = RightMark(tree, info.inner)
                new = Config(push(frame, exposed.transitions[label], mark), config.cursor, config.path, config.open - 1)
                out.append(self.note(("reduce", tree), new))
            elif isinstance(action, Accept):
                tree, addr, _, stars = action.item
                if config.cursor != len(self.tokens) or tree not in g.start_trees:
                    continue
                _, frame, _ = _walk(g, config.stack, tree, addr, stars, include_self=True)
                if frame is not None:
                    continue
                accepted = self.note(("accept", tree), config)
                break
        return out, accepted

    def run(self) -> ParseOutcome:
        todo = [Config(None, 0)]
        while todo:
            config = todo.pop()
            succ, accepted = self.successors(config)
            if accepted is not None:
                return self.outcome(True, accepted.history())
            if not succ:
                self.stats.backtracks += 1
            todo.extend(reversed(succ))
        return self.outcome(False, [])

    def outcome(self, accepted: bool, path) -> ParseOutcome:
        return ParseOutcome(accepted, self.stats, self.trace, path, self.records, self.visited)


def step_budget_from_env() -> int:
    raw = os.environ.get("TAGLR_STEP_BUDGET")
    if not raw:
        return DEFAULT_STEP_BUDGET
    try:
        value = int(raw)
    except ValueError:
        raise ValueError(f"TAGLR_STEP_BUDGET must be an integer, got {raw!r}") from None
    if value <= 0:
        raise ValueError("TAGLR_STEP_BUDGET must be positive")
    return value


def parse(
    fsa: Fsa,
    g: Grammar,
    tokens: Iterable[str],
    trace: bool = False,
    step_budget: int | None = None,
) -> ParseOutcome:
    """Recognize ``tokens``, expanding table states as they are reached.

    Raises StepBudgetExceeded when the search runs past ``step_budget``
    steps (default: ``TAGLR_STEP_BUDGET`` or one million).
    """
    tokens = list(tokens)
    unknown = [t for t in tokens if t not in g.terminals]
    if unknown:
        out = ParseOutcome(False, Stats())
        out.diagnostic = "unknown token(s): " + ", ".join(sorted(set(unknown)))
        return out
    budget = step_budget if step_budget is not None else step_budget_from_env()
    return _Driver(fsa, g, tokens, trace, budget).run()


def recognizes(fsa: Fsa, g: Grammar, tokens: Iterable[str]) -> bool:
    return parse(fsa, g, tokens).accepted
