"""``taglr`` command line.

Exit codes: 0 accept/success, 1 reject (or oracle disagreements),
2 usage or grammar error, 3 step budget exceeded.
"""

from __future__ import annotations

import argparse
import sys

from . import snapshot
from .dot import export_dot
from .engine import StepBudgetExceeded, parse
from .grammar import GrammarError, load_grammar, parse_grammar_text, validate
from .lazy import build_lazy
from .oracle import all_strings, bf_accepts, derive_strings
from .table import build_eager
from .workbench import Workbench, repl

OK, REJECT, USAGE, BUDGET = 0, 1, 2, 3


def _grammar(path):
    g = load_grammar(path)
    findings = validate(g)
    if findings:
        raise GrammarError("; ".join(findings))
    return g


def _write(text: str, path) -> None:
    if path in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)


def cmd_check(args) -> int:
    g = load_grammar(args.grammar)
    findings = validate(g)
    for f in findings:
        print(f"{args.grammar}: {f}", file=sys.stderr)
    if findings:
        return USAGE
    fsa = build_eager(g)
    print(f"ok: {len(g.initial_trees)} initial, {len(g.auxiliary_trees)} auxiliary trees; {len(fsa)} states")
    for sid in fsa.conflicts():
        acts = "; ".join(str(a) for a in fsa[sid].actions)
        print(f"conflict in state {sid}: {acts}")
    return OK


def cmd_build(args) -> int:
    g = _grammar(args.grammar)
    fsa = build_eager(g) if args.mode == "eager" else build_lazy(g)
    if args.output:
        snapshot.save(args.output, fsa, g)
        print(f"{len(fsa)} states written to {args.output}", file=sys.stderr)
    else:
        sys.stdout.write(fsa.describe() + "\n")
    return OK


def cmd_parse(args) -> int:
    g = _grammar(args.grammar)
    tokens = " ".join(args.tokens).split() if args.string else list(args.tokens)
    if args.table:
        fsa = snapshot.load(args.table, g, force_rekernel=args.force_rekernel)
    else:
        fsa = build_lazy(g)
    outcome = parse(fsa, g, tokens, trace=args.trace)
    for line in outcome.trace:
        print(line)
    if outcome.diagnostic:
        print(outcome.diagnostic, file=sys.stderr)
    print(outcome.verdict)
    if args.stats:
        s = outcome.stats
        print(f"steps={s.steps} expansions={s.expansions} backtracks={s.backtracks} max_depth={s.max_depth}")
    if args.table and args.save_table:
        snapshot.save(args.table, fsa, g)
    return OK if outcome.accepted else REJECT


def cmd_repl(args) -> int:
    g = _grammar(args.grammar)
    return repl(Workbench(g, mode=args.mode))


def cmd_dot(args) -> int:
    with open(args.source, encoding="utf-8") as fh:
        text = fh.read()
    if text.lstrip().startswith("{"):
        fsa = snapshot.loads(text)
    else:
        g = parse_grammar_text(text)
        findings = validate(g)
        if findings:
            raise GrammarError("; ".join(findings))
        fsa = build_lazy(g) if args.mode == "lazy" else build_eager(g)
    _write(export_dot(fsa), args.output)
    return OK


def cmd_oracle(args) -> int:
    g = _grammar(args.grammar)
    if not args.compare:
        for w in sorted(derive_strings(g, args.maxlen), key=lambda w: (len(w), w)):
            print(" ".join(w) if w else "(empty)")
        return OK
    fsa = build_lazy(g)
    total = bad = 0
    for w in all_strings(g.terminals, args.maxlen):
        total += 1
        if parse(fsa, g, w).accepted != bf_accepts(g, w):
            bad += 1
            print("disagree: " + (" ".join(w) or "(empty)"))
    print(f"{bad} disagreements over {total} strings")
    return OK if bad == 0 else REJECT


def cmd_purge(args) -> int:
    removed = snapshot.purge_file(args.snapshot, args.output)
    print(f"removed {removed} states")
    return OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="taglr", description="TAG LR parser-generator workbench")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("check", help="validate a grammar and report conflicts")
    s.add_argument("grammar")
    s.set_defaults(func=cmd_check)

    s = sub.add_parser("build", help="build the automaton")
    s.add_argument("grammar")
    s.add_argument("--mode", choices=("eager", "lazy"), default="eager")
    s.add_argument("-o", "--output", help="snapshot file to write")
    s.set_defaults(func=cmd_build)

    s = sub.add_parser("parse", help="recognize a token string")
    s.add_argument("grammar")
    s.add_argument("tokens", nargs="*")
    s.add_argument("--table", help="start from a snapshot")
    s.add_argument("--save-table", action="store_true", help="write expansions back to --table")
    s.add_argument("--force-rekernel", action="store_true", help="accept a snapshot for another grammar")
    s.add_argument("--trace", action="store_true")
    s.add_argument("--stats", action="store_true")
    s.add_argument("--string", action="store_true", help="split the arguments on whitespace")
    s.set_defaults(func=cmd_parse)

    s = sub.add_parser("repl", help="interactive session")
    s.add_argument("grammar")
    s.add_argument("--mode", choices=("eager", "lazy"), default="lazy")
    s.set_defaults(func=cmd_repl)

    s = sub.add_parser("dot", help="Graphviz export of a grammar's automaton or a snapshot")
    s.add_argument("source")
    s.add_argument("--mode", choices=("eager", "lazy"), default="eager")
    s.add_argument("-o", "--output")
    s.set_defaults(func=cmd_dot)

    s = sub.add_parser("oracle", help="brute-force language listing or driver comparison")
    s.add_argument("grammar")
    s.add_argument("--maxlen", type=int, required=True)
    s.add_argument("--compare", action="store_true")
    s.set_defaults(func=cmd_oracle)

    s = sub.add_parser("purge", help="drop unreachable states from a snapshot")
    s.add_argument("snapshot")
    s.add_argument("-o", "--output")
    s.set_defaults(func=cmd_purge)
    return p


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args, extra = parser.parse_known_args(argv)
        # tokens may follow options, e.g. ``parse g.tag --string "a e c"``
        if extra and args.command == "parse" and not any(x.startswith("-") for x in extra):
            args.tokens += extra
        elif extra:
            parser.error("unrecognized arguments: " + " ".join(extra))
    except SystemExit as e:
        return USAGE if e.code else OK
    try:
        return args.func(args)
    except StepBudgetExceeded as e:
        print(f"taglr: {e}", file=sys.stderr)
        return BUDGET
    except (GrammarError, OSError, ValueError) as e:
        print(f"taglr: {e}", file=sys.stderr)
        return USAGE


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
