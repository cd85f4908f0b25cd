"""Drive the workbench as the REPL would, then snapshot and export.

    python3 demos/05_workbench.py
"""

import io
import tempfile
from pathlib import Path

from taglr import fixtures
from taglr.workbench import Workbench, repl

bench = Workbench(fixtures.g1(), mode="lazy")
session = f"""\
:parse a e c
:stats
:add {fixtures.GAMMA}
:parse a b e c d
:stats
:purge
:quit
"""
out = io.StringIO()
repl(bench, stdin=io.StringIO(session), out=out)
print(out.getvalue())

with tempfile.TemporaryDirectory() as tmp:
    path = Path(tmp) / "table.json"
    bench.save(path)
    print(f"snapshot: {path.stat().st_size} bytes")
    again = Workbench(bench.g)
    again.load(path)
    print(f"reloaded table equals the live one: {again.fsa == bench.fsa}")

print(bench.dot())
