"""Graphviz rendering of an automaton.

Kernel-form (unexpanded) states are drawn with a bold outline and
accepting states with a double outline.
"""

from __future__ import annotations

from .items import label_key
from .table import Fsa


def _quote(text: str) -> str:
    return '"' + text.replace('"', '\\"') + '"'


def export_dot(fsa: Fsa, name: str = "fsa") -> str:
    lines = [f"digraph {name} {{", "  rankdir=LR;", "  node [shape=circle];"]
    for sid, state in sorted(fsa.states.items()):
        n = len(state.items())
        text = str(sid) + "\\n" + f"{n} item{'' if n == 1 else 's'}"
        attrs = [f"label={_quote(text)}"]
        if not state.expanded:
            attrs.append("style=bold")
        if state.accepting:
            attrs.append("peripheries=2")
        lines.append(f"  s{sid} [{', '.join(attrs)}];")
    for sid, state in sorted(fsa.states.items()):
        for label, target in sorted(state.transitions.items(), key=lambda kv: label_key(kv[0])):
            lines.append(f"  s{sid} -> s{target} [label={_quote(str(label))}];")
    lines.append("}")
    return "\n".join(lines) + "\n"
