"""Lazy tables start with one state and grow only where parses go.

    python3 demos/02_lazy_expansion.py
"""

from taglr import build_eager, build_lazy, fixtures, parse

g = fixtures.g1()
fsa = build_lazy(g)
print(f"lazy table before any parse: {len(fsa)} state(s)")

for text in ["a e c", "a e c", "a a e c c"]:
    out = parse(fsa, g, text.split())
    print(f"{text!r}: {out.verdict}, {out.stats.expansions} expansions, table now {len(fsa)} states")

print(f"eager table for comparison: {len(build_eager(g))} states")
