"""An editing session over one grammar and its automaton, plus the REPL.

The session keeps the automaton across edits: ``:add`` and ``:rm`` go
through :func:`taglr.lazy.apply_edit`, so only the affected states are
returned to kernel form and later parses re-expand them on demand.
"""

from __future__ import annotations

import shlex
import sys
from dataclasses import dataclass
from typing import TextIO

from . import snapshot
from .dot import export_dot
from .engine import ParseOutcome, StepBudgetExceeded, parse
from .grammar import Grammar, GrammarError, parse_tree_decl
from .lazy import EditReport, Remove, add_edit, apply_edit, build_lazy, purge_unreachable
from .table import Fsa, build_eager


@dataclass
class StatsReport:
    total: int
    expanded: int
    kernel_form: int
    reachable: int
    unreachable: int
    expansions: int
    rekerneled: int
    reused: int
    reconnected: int

    def __str__(self):
        return (
            f"states: {self.total} ({self.expanded} expanded, {self.kernel_form} kernel form)\n"
            f"reachable: {self.reachable}, unreachable: {self.unreachable}\n"
            f"expansions this session: {self.expansions}\n"
            f"last edit: {self.rekerneled} rekerneled, {self.reused} reused, "
            f"{self.reconnected} reconnected since"
        )


class Workbench:
    """A grammar, its automaton and the bookkeeping the REPL reports.

    ``reused`` counts states that survived the last edit untouched;
    ``reconnected`` counts successor lookups since then that landed on an
    already existing state instead of creating one.
    """

    def __init__(self, g: Grammar, fsa: Fsa | None = None, mode: str = "lazy", step_budget: int | None = None):
        if fsa is None:
            fsa = build_eager(g) if mode == "eager" else build_lazy(g)
        self.g = g
        self.fsa = fsa
        self.step_budget = step_budget
        self.expansions = 0
        self.last_report: EditReport | None = None
        self.reused = 0
        self.reconnected = 0

    def parse(self, tokens, trace: bool = False) -> ParseOutcome:
        out = parse(self.fsa, self.g, tokens, trace=trace, step_budget=self.step_budget)
        self.expansions += out.stats.expansions
        if self.last_report is not None:
            self.reconnected += sum(len(r.reused) for r in out.records)
        return out

    def _edit(self, edit) -> EditReport:
        before = set(self.fsa.states)
        self.g, report = apply_edit(self.fsa, self.g, edit)
        self.last_report = report
        self.reused = len(before - report.rekerneled - report.deleted)
        self.reconnected = 0
        return report

    def add(self, decl: str) -> EditReport:
        return self._edit(add_edit(parse_tree_decl(decl)))

    def remove(self, name: str) -> EditReport:
        return self._edit(Remove(name))

    def purge(self) -> int:
        return purge_unreachable(self.fsa)

    def stats(self) -> StatsReport:
        states = self.fsa.states.values()
        expanded = sum(1 for s in states if s.expanded)
        reachable = len(self.fsa.reachable())
        report = self.last_report
        return StatsReport(
            total=len(self.fsa),
            expanded=expanded,
            kernel_form=len(self.fsa) - expanded,
            reachable=reachable,
            unreachable=len(self.fsa) - reachable,
            expansions=self.expansions,
            rekerneled=len(report.rekerneled) if report else 0,
            reused=self.reused,
            reconnected=self.reconnected,
        )

    def dot(self) -> str:
        return export_dot(self.fsa)

    def save(self, path) -> None:
        snapshot.save(path, self.fsa, self.g)

    def load(self, path, force_rekernel: bool = False) -> None:
        self.fsa = snapshot.load(path, self.g, force_rekernel=force_rekernel)


HELP = """\
commands:
  :parse <tokens>     recognize a token string
  :add <tree-decl>    add an elementary tree, e.g. :add aux b : (S:na "b" (S*:na))
  :rm <name>          remove an elementary tree
  :stats              automaton statistics
  :dot <file>         write the automaton as Graphviz
  :purge              drop states unreachable from state 0
  :save <file>        write a snapshot
  :load <file>        read a snapshot built for the current grammar
  :grammar            print the current grammar
  :quit               leave"""


def execute(bench: Workbench, line: str, out: TextIO) -> bool:
    """Run one REPL command; returns False when the session should end."""
    line = line.strip()
    if not line or line.startswith("#"):
        return True
    if not line.startswith(":"):
        line = ":parse " + line
    cmd, _, rest = line.partition(" ")
    rest = rest.strip()
    try:
        if cmd in (":quit", ":q", ":exit"):
            return False
        elif cmd == ":parse":
            outcome = bench.parse(rest.split())
            if outcome.diagnostic:
                print(outcome.diagnostic, file=out)
            print(outcome.verdict, file=out)
        elif cmd == ":add":
            print(bench.add(rest), file=out)
        elif cmd == ":rm":
            print(bench.remove(rest), file=out)
        elif cmd == ":stats":
            print(bench.stats(), file=out)
        elif cmd == ":dot":
            path = _one_path(rest)
            with open(path, "w", encoding="utf-8") as fh:
                fh.write(bench.dot())
            print(f"wrote {path}", file=out)
        elif cmd == ":purge":
            print(f"removed {bench.purge()} states", file=out)
        elif cmd == ":save":
            path = _one_path(rest)
            bench.save(path)
            print(f"saved {path}", file=out)
        elif cmd == ":load":
            path = _one_path(rest)
            bench.load(path)
            print(f"loaded {path} ({len(bench.fsa)} states)", file=out)
        elif cmd == ":grammar":
            out.write(bench.g.text)
        elif cmd in (":help", ":h", ":?"):
            print(HELP, file=out)
        else:
            print(f"unknown command {cmd}; try :help", file=out)
    except StepBudgetExceeded as e:
        print(f"error: {e}", file=out)
    except (GrammarError, OSError, ValueError) as e:
        print(f"error: {e}", file=out)
    return True


def _one_path(rest: str) -> str:
    parts = shlex.split(rest)
    if len(parts) != 1:
        raise ValueError("expected one file name")
    return parts[0]


def repl(bench: Workbench, stdin: TextIO | None = None, out: TextIO | None = None) -> int:
    stdin = stdin if stdin is not None else sys.stdin
    out = out if out is not None else sys.stdout
    interactive = stdin.isatty()
    if interactive:
        print("taglr workbench; :help for commands", file=out)
    while True:
        if interactive:
            out.write("taglr> ")
            out.flush()
        line = stdin.readline()
        if not line:
            break
        if not execute(bench, line, out):
            break
    return 0
