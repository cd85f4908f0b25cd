"""A first look: build the table for a^n e c^n and watch a parse.

    python3 demos/01_g1_tour.py
"""

from taglr import build_eager, fixtures, parse

g = fixtures.g1()
print(g.text)

fsa = build_eager(g)
print(f"eager table: {len(fsa)} states")
for sid in sorted(fsa.states):
    state = fsa[sid]
    print(f"  state {sid}: {len(state.closure)} items, {len(state.transitions)} transitions, {len(state.actions)} actions")

for text in ["e", "a e c", "a a e c c", "a e c c"]:
    out = parse(fsa, g, text.split(), trace=True)
    print(f"\n{text!r}: {out.verdict}")
    for line in out.trace:
        print("   ", line)
