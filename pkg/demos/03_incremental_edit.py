"""Add an auxiliary tree to a built table and repair only what it touches.

    python3 demos/03_incremental_edit.py
"""

from taglr import AddAuxiliary, Remove, apply_edit, build_eager, equivalent, expand_all, fixtures, parse
from taglr import parse_tree_decl, purge_unreachable

g1 = fixtures.g1()
fsa = build_eager(g1)
print(f"G1 table: {len(fsa)} states")

gamma = parse_tree_decl(fixtures.GAMMA)
g2, report = apply_edit(fsa, g1, AddAuxiliary(gamma))
print(f"after adding gamma: {report}")
print(f"  {len(fsa)} states, {len(fsa.reachable())} reachable")

out = parse(fsa, g2, "a b e c d".split())
print(f"'a b e c d': {out.verdict}, foot counts {out.foot_counts()}")

expand_all(fsa, g2)
print(f"fully expanded, same as a fresh G2 table: {equivalent(fsa, g2, build_eager(g2))}")
# expansion reconnected the states the edit had orphaned, so nothing is left to purge
print(f"purged {purge_unreachable(fsa)} unreachable states")

back, report = apply_edit(fsa, g2, Remove("gamma"))
print(f"after removing gamma again: {report}")
expand_all(fsa, back)
print(f"same as a fresh G1 table: {equivalent(fsa, back, build_eager(back))}")
