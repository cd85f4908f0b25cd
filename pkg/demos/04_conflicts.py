"""Conflicting reduce actions are resolved by backtracking, not by the table.

    python3 demos/04_conflicts.py
"""

from taglr import build_eager, fixtures, parse
from taglr.items import ReduceRoot

g = fixtures.g_conflict()
print(g.text)
fsa = build_eager(g)
for sid in fsa.conflicts():
    reduces = sorted(a.item.tree for a in fsa[sid].actions if isinstance(a, ReduceRoot))
    print(f"state {sid} offers {len(fsa[sid].actions)} actions; reduces: {reduces}")

out = parse(fsa, g, "a e c".split(), trace=True)
print(f"\n'a e c': {out.verdict} after {out.stats.backtracks} backtrack(s)")
for line in out.trace:
    print("   ", line)
