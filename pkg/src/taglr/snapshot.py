"""JSON snapshots of an automaton, tied to the grammar they were built for."""

from __future__ import annotations

import json

from .grammar import Grammar, GrammarError, format_address, parse_address
from .items import (
    Accept,
    DotPos,
    DottedItem,
    Foot,
    ReduceRoot,
    ResumeRight,
    Right,
    Shift,
    Term,
    label_key,
    sort_items,
)
from .lazy import _rekey, purge_unreachable
from .table import Fsa, start_kernel

FORMAT_VERSION = 1


class SnapshotError(GrammarError):
    pass


def _item(item: DottedItem) -> dict:
    return {
        "tree": item.tree,
        "addr": format_address(item.addr),
        "pos": item.pos.name,
        "stars": [format_address(a) for a in sorted(item.stars)],
    }


def _load_item(d: dict) -> DottedItem:
    try:
        return DottedItem(
            d["tree"],
            parse_address(d["addr"]),
            DotPos[d["pos"]],
            frozenset(parse_address(a) for a in d["stars"]),
        )
    except (KeyError, TypeError, ValueError) as e:
        raise SnapshotError(f"malformed item {d!r}: {e}") from None


def _label(label) -> dict:
    if isinstance(label, Term):
        return {"kind": "term", "symbol": label.symbol}
    if isinstance(label, Right):
        return {"kind": "right", "tree": label.tree, "host": label.host, "addr": format_address(label.host_addr)}
    return {"kind": "foot"}


def _load_label(d: dict):
    kind = d.get("kind")
    if kind == "term":
        return Term(d["symbol"])
    if kind == "foot":
        return Foot
    if kind == "right":
        return Right(d["tree"], d["host"], parse_address(d["addr"]))
    raise SnapshotError(f"unknown transition label {d!r}")


def _action(action) -> dict:
    if isinstance(action, Shift):
        return {"kind": "shift", "symbol": action.symbol}
    kind = {ResumeRight: "resume", ReduceRoot: "reduce", Accept: "accept"}[type(action)]
    return {"kind": kind, "item": _item(action.item)}


_ACTIONS = {"resume": ResumeRight, "reduce": ReduceRoot, "accept": Accept}


def _load_action(d: dict):
    kind = d.get("kind")
    if kind == "shift":
        return Shift(d["symbol"])
    if kind in _ACTIONS:
        return _ACTIONS[kind](_load_item(d["item"]))
    raise SnapshotError(f"unknown action {d!r}")


def to_dict(fsa: Fsa, g: Grammar) -> dict:
    return _encode(fsa, g.digest, g.text)


def _encode(fsa: Fsa, digest: str | None, grammar_text: str | None) -> dict:
    states = []
    for sid, s in sorted(fsa.states.items()):
        entry = {
            "id": sid,
            "status": s.status,
            "version": s.version,
            "kernel": [_item(i) for i in sort_items(s.kernel)],
        }
        if s.expanded:
            entry["closure"] = [_item(i) for i in sort_items(s.closure)]
            entry["transitions"] = [
                {"label": _label(lab), "target": t}
                for lab, t in sorted(s.transitions.items(), key=lambda kv: label_key(kv[0]))
            ]
            entry["actions"] = [_action(a) for a in s.actions]
        states.append(entry)
    return {
        "format_version": FORMAT_VERSION,
        "grammar_hash": digest,
        "grammar": grammar_text,
        "grammar_version": fsa.version,
        "start": fsa.start,
        "next_id": fsa.next_id,
        "states": states,
    }


def dumps(fsa: Fsa, g: Grammar) -> str:
    return json.dumps(to_dict(fsa, g), indent=1, ensure_ascii=False) + "\n"


def save(path, fsa: Fsa, g: Grammar) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dumps(fsa, g))


def from_dict(data: dict, g: Grammar | None = None, force_rekernel: bool = False) -> Fsa:
    """Rebuild an automaton.

    With a grammar, the stored hash must match unless ``force_rekernel`` is
    set, in which case every state is returned to kernel form and items the
    grammar no longer supports are dropped.  Without a grammar the states
    are loaded as stored (enough for DOT export and purging).
    """
    if data.get("format_version") != FORMAT_VERSION:
        raise SnapshotError(f"unsupported snapshot format {data.get('format_version')!r}")
    if data.get("start", 0) != Fsa.start:
        raise SnapshotError("snapshot start state must be 0")
    fsa = Fsa(data.get("grammar_version", 0))
    for d in data["states"]:
        sid = d["id"]
        kernel = frozenset(_load_item(i) for i in d["kernel"])
        state = fsa.add_state(kernel, sid)
        if d["status"] == "expanded":
            state.closure = frozenset(_load_item(i) for i in d["closure"])
            state.transitions = {_load_label(t["label"]): t["target"] for t in d["transitions"]}
            state.actions = tuple(_load_action(a) for a in d["actions"])
            state.version = d.get("version")
    fsa.next_id = max(data.get("next_id", 0), fsa.next_id)
    if fsa.start not in fsa.states:
        raise SnapshotError("snapshot has no start state")
    if g is None:
        return fsa
    if data.get("grammar_hash") != g.digest:
        if not force_rekernel:
            raise SnapshotError("snapshot was built for a different grammar (use --force-rekernel)")
        _rekernel_all(fsa, g)
        return fsa
    for state in fsa.states.values():
        if state.expanded:
            state.version = g.version
    fsa.version = g.version
    return fsa


def _valid(item: DottedItem, g: Grammar) -> bool:
    if item.tree not in g:
        return False
    nodes = g[item.tree].nodes
    return item.addr in nodes and all(a in nodes for a in item.stars)


def _rekernel_all(fsa: Fsa, g: Grammar) -> None:
    for sid in sorted(fsa.states):
        if sid not in fsa.states:
            continue
        state = fsa.states[sid]
        state.rekernel()
        kernel = start_kernel(g) if sid == fsa.start else frozenset(i for i in state.kernel if _valid(i, g))
        if not kernel:
            fsa.delete_state(sid)
        elif kernel != state.kernel:
            _rekey(fsa, sid, kernel)
    fsa.version = g.version


def loads(text: str, g: Grammar | None = None, force_rekernel: bool = False) -> Fsa:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise SnapshotError(f"not a snapshot: {e}") from None
    return from_dict(data, g, force_rekernel)


def load(path, g: Grammar | None = None, force_rekernel: bool = False) -> Fsa:
    with open(path, encoding="utf-8") as fh:
        return loads(fh.read(), g, force_rekernel)


def purge_file(path, output=None) -> int:
    """Drop unreachable states from a snapshot file; returns the count removed.

    No grammar is needed: the stored hash and grammar text are carried over.
    """
    with open(path, encoding="utf-8") as fh:
        data = json.load(fh)
    fsa = from_dict(data)
    removed = purge_unreachable(fsa)
    with open(output or path, "w", encoding="utf-8") as fh:
        json.dump(_encode(fsa, data.get("grammar_hash"), data.get("grammar")), fh, indent=1, ensure_ascii=False)
        fh.write("\n")
    return removed
