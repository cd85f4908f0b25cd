"""On-demand expansion and incremental repair of the automaton.

A lazy automaton starts as the single kernel-form start state; the driver
expands states as it reaches them.  Grammar edits return the affected
states to kernel form and leave everything else, reachable or not, in
place so that later expansions reconnect to it.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field

from .grammar import AUXILIARY, INITIAL, ElementaryTree, Grammar, GrammarError, validate
from .items import LA, LB, DottedItem, Right, close, label_key, successors
from .table import Fsa, expand_state, start_kernel


class EditError(GrammarError):
    pass


@dataclass
class ExpansionRecord:
    state: int
    added: int = 0
    created: list[int] = field(default_factory=list)
    reused: list[int] = field(default_factory=list)
    expanded: bool = False


@dataclass(frozen=True)
class AddInitial:
    tree: ElementaryTree


@dataclass(frozen=True)
class AddAuxiliary:
    tree: ElementaryTree


@dataclass(frozen=True)
class Remove:
    name: str


GrammarEdit = AddInitial | AddAuxiliary | Remove


def add_edit(tree: ElementaryTree) -> GrammarEdit:
    return AddInitial(tree) if tree.kind == INITIAL else AddAuxiliary(tree)


@dataclass
class EditReport:
    version: int
    rekerneled: set[int] = field(default_factory=set)
    dropped_transitions: int = 0
    retained_unreachable: int = 0
    deleted: set[int] = field(default_factory=set)

    def __str__(self):
        ids = ", ".join(map(str, sorted(self.rekerneled))) or "none"
        text = (
            f"rekerneled states: {ids}; dropped transitions: {self.dropped_transitions}; "
            f"retained unreachable: {self.retained_unreachable}"
        )
        if self.deleted:
            text += "; deleted states: " + ", ".join(map(str, sorted(self.deleted)))
        return text


def build_lazy(g: Grammar) -> Fsa:
    fsa = Fsa(g.version)
    fsa.add_state(start_kernel(g))
    return fsa


def ensure_expanded(fsa: Fsa, g: Grammar, sid: int) -> ExpansionRecord:
    """Expand ``sid`` unless it is already expanded under this grammar version."""
    state = fsa.states[sid]
    if state.expanded and state.version == g.version:
        return ExpansionRecord(sid)
    added, created, reused = expand_state(fsa, g, sid)
    return ExpansionRecord(sid, added, created, reused, expanded=True)


def expand_all(fsa: Fsa, g: Grammar) -> list[ExpansionRecord]:
    """Expand every state reachable from the start state."""
    records = []
    seen = {fsa.start}
    queue = deque([fsa.start])
    while queue:
        sid = queue.popleft()
        rec = ensure_expanded(fsa, g, sid)
        if rec.expanded:
            records.append(rec)
        for _, target in sorted(fsa.states[sid].transitions.items(), key=lambda kv: label_key(kv[0])):
            if target not in seen:
                seen.add(target)
                queue.append(target)
    return records


# -- edits -------------------------------------------------------------------


def _affected_by_add(fsa: Fsa, new: Grammar, tree: ElementaryTree) -> set[int]:
    """Expanded states whose closure or successors change when ``tree`` is added."""
    adjoinable = new._adjoiners
    # auxiliary trees that can adjoin somewhere inside the new tree
    inner = set()
    for addr in tree.nodes:
        inner |= adjoinable.get((tree.name, addr), frozenset())
    aux = tree.name if tree.kind == AUXILIARY else None
    hit = set()
    for sid, state in fsa.states.items():
        if not state.expanded:
            continue
        if aux is not None and any(isinstance(lab, Right) and lab.tree == aux for lab in state.transitions):
            hit.add(sid)
            continue
        for t, addr, pos, _ in state.closure:
            if pos == LB and t in inner and addr == new[t].foot:
                # left completion would now enter the new tree
                hit.add(sid)
                break
            if pos == LA and aux in adjoinable.get((t, addr), ()):
                # adjunction prediction of the new tree
                hit.add(sid)
                break
    return hit


def _mentions(state, name: str) -> bool:
    return any(item.tree == name for item in state.items())


def apply_edit(fsa: Fsa, g: Grammar, edit: GrammarEdit) -> tuple[Grammar, EditReport]:
    """Apply a grammar edit, returning affected states to kernel form.

    Unaffected expanded states keep their ids and contents and are
    re-stamped with the new grammar version.
    """
    if isinstance(edit, (AddInitial, AddAuxiliary)):
        tree = edit.tree
        want = INITIAL if isinstance(edit, AddInitial) else AUXILIARY
        if tree.kind != want:
            raise EditError(f"tree {tree.name!r} is not an {want} tree")
        if tree.name in g:
            raise EditError(f"tree name {tree.name!r} already in use")
        new = g.with_tree(tree)
    elif isinstance(edit, Remove):
        if edit.name not in g:
            raise EditError(f"no tree named {edit.name!r}")
        new = g.without_tree(edit.name)
    else:
        raise TypeError(f"not a grammar edit: {edit!r}")
    findings = validate(new)
    if findings:
        raise EditError("edit leaves the grammar invalid: " + "; ".join(findings))

    report = EditReport(new.version)
    if isinstance(edit, Remove):
        _remove(fsa, new, edit.name, report)
    else:
        affected = _affected_by_add(fsa, new, edit.tree)
        for sid in affected:
            report.dropped_transitions += len(fsa.states[sid].transitions)
            fsa.states[sid].rekernel()
        report.rekerneled = affected
        if isinstance(edit, AddInitial) and edit.tree.root_label == new.start:
            _rekernel_start(fsa, new, report)

    for sid, state in fsa.states.items():
        if state.expanded:
            state.version = new.version
    fsa.version = new.version
    report.retained_unreachable = len(fsa.states) - len(fsa.reachable())
    return new, report


def _rekernel_start(fsa: Fsa, new: Grammar, report: EditReport) -> None:
    start = fsa.states[fsa.start]
    if start.expanded:
        report.dropped_transitions += len(start.transitions)
    start.rekernel()
    dropped = _rekey(fsa, fsa.start, start_kernel(new))
    if dropped is not None:
        report.deleted.add(dropped)
        report.rekerneled.discard(dropped)
    report.rekerneled.add(fsa.start)


def _rekey(fsa: Fsa, sid: int, kernel: frozenset[DottedItem]) -> int | None:
    """Give ``sid`` a new kernel, merging with any state that already has it.

    On a collision the existing state survives (it may still be expanded and
    untouched by the edit) unless ``sid`` is the start state.  Edges into the
    dropped state are redirected.  Returns the dropped id, if any.
    """
    state = fsa.states[sid]
    if fsa.by_kernel.get(state.kernel) == sid:
        del fsa.by_kernel[state.kernel]
    state.kernel = kernel
    other = fsa.by_kernel.get(kernel)
    if other is None or other == sid:
        fsa.by_kernel[kernel] = sid
        return None
    keep, drop = (sid, other) if sid == fsa.start else (other, sid)
    fsa.delete_state(drop)
    fsa.by_kernel[kernel] = keep
    for s in fsa.states.values():
        for label, target in s.transitions.items():
            if target == drop:
                s.transitions[label] = keep
    return drop


def _remove(fsa: Fsa, new: Grammar, name: str, report: EditReport) -> None:
    hit = sorted(sid for sid, s in fsa.states.items() if _mentions(s, name))
    for sid in hit:
        if sid not in fsa.states:
            continue  # merged away earlier in this loop
        state = fsa.states[sid]
        report.dropped_transitions += len(state.transitions)
        state.rekernel()
        kernel = frozenset(i for i in state.kernel if i.tree != name)
        if not kernel and sid != fsa.start:
            fsa.delete_state(sid)
            report.deleted.add(sid)
            continue
        if kernel != state.kernel:
            dropped = _rekey(fsa, sid, kernel)
            if dropped is not None:
                report.deleted.add(dropped)
                report.rekerneled.discard(dropped)
            if sid not in fsa.states:
                continue
        report.rekerneled.add(sid)
    # drop edges into deleted states (only rekerneled states could hold them)
    for s in fsa.states.values():
        for label in [lab for lab, t in s.transitions.items() if t not in fsa.states]:
            del s.transitions[label]


def purge_unreachable(fsa: Fsa) -> int:
    keep = fsa.reachable()
    doomed = [sid for sid in fsa.states if sid not in keep]
    for sid in doomed:
        fsa.delete_state(sid)
    return len(doomed)


def equivalent(fsa_a: Fsa, g: Grammar, fsa_b: Fsa) -> bool:
    """Whether two automata for ``g`` have isomorphic reachable parts.

    Both are copied and exhaustively expanded first.  States correspond when
    their kernels are equal; corresponding states must have the same
    transition labels leading to corresponding states and the same actions.
    """
    a, b = fsa_a.copy(), fsa_b.copy()
    expand_all(a, g)
    expand_all(b, g)
    pairs = {a.start: b.start}
    todo = [a.start]
    while todo:
        sa = a.states[todo.pop()]
        sb = b.states[pairs[sa.id]]
        if sa.kernel != sb.kernel or sa.actions != sb.actions:
            return False
        if sa.transitions.keys() != sb.transitions.keys():
            return False
        for label, ta in sa.transitions.items():
            tb = sb.transitions[label]
            if ta in pairs:
                if pairs[ta] != tb:
                    return False
            else:
                pairs[ta] = tb
                todo.append(ta)
    return len(set(pairs.values())) == len(pairs) == len(b.reachable())


def rekernel_sound(old: Fsa, new_fsa: Fsa, new: Grammar, report: EditReport) -> list[int]:
    """States of ``old`` left expanded by an edit whose contents are stale.

    Brute force: recompute closure and successor kernels under ``new`` for
    every old expanded state that was not rekerneled.  Returns offenders.
    """
    bad = []
    for sid, state in old.states.items():
        if not state.expanded or sid in report.rekerneled or sid in report.deleted:
            continue
        closed = close(state.kernel, new)
        succ = successors(closed, new)
        stored = {label: old.states[t].kernel for label, t in state.transitions.items()}
        kept = new_fsa.states.get(sid)
        if closed != state.closure or succ != stored or kept is None or kept.closure != state.closure:
            bad.append(sid)
    return bad
