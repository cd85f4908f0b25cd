import io
import json
import subprocess
import sys

import pytest

from taglr import fixtures, snapshot
from taglr.cli import run
from taglr.dot import export_dot
from taglr.engine import parse
from taglr.grammar import parse_grammar_text, parse_tree_decl
from taglr.lazy import AddAuxiliary, apply_edit, build_lazy, equivalent, expand_all
from taglr.table import build_eager
from taglr.workbench import Workbench, execute, repl

from conftest import GOLDEN, GRAMMARS, toks

G1 = str(GRAMMARS / "g1.tag")
G2 = str(GRAMMARS / "g2.tag")
GC = str(GRAMMARS / "g_conflict.tag")
GAMMA = parse_tree_decl(fixtures.GAMMA)


def edited_g2_fsa():
    g = fixtures.g1()
    fsa = build_eager(g)
    g2, _ = apply_edit(fsa, g, AddAuxiliary(GAMMA))
    parse(fsa, g2, toks("a b e c d"))
    return fsa, g2


# -- snapshots ---------------------------------------------------------------


def test_snapshot_round_trip():
    fsa, g = edited_g2_fsa()
    text = snapshot.dumps(fsa, g)
    again = snapshot.loads(text, g)
    assert again == fsa
    assert again.by_kernel == fsa.by_kernel
    assert again.next_id == fsa.next_id and again.version == fsa.version
    assert snapshot.dumps(again, g) == text


def test_snapshot_schema(g1):
    data = json.loads(snapshot.dumps(build_eager(g1), g1))
    assert data["format_version"] == snapshot.FORMAT_VERSION
    assert data["grammar_hash"] == g1.digest
    assert data["start"] == 0
    s0 = data["states"][0]
    assert s0["status"] == "expanded"
    assert s0["kernel"] == [{"tree": "alpha", "addr": "ε", "pos": "LA", "stars": []}]
    assert {"label": {"kind": "term", "symbol": "a"}, "target": 1} in s0["transitions"]
    assert {"kind": "shift", "symbol": "e"} in s0["actions"]


def test_snapshot_kernel_form_states(g1):
    text = snapshot.dumps(build_lazy(g1), g1)
    state = json.loads(text)["states"][0]
    assert state["status"] == "kernel" and "closure" not in state
    assert snapshot.loads(text, g1) == build_lazy(g1)


def test_snapshot_hash_mismatch(g1, g2):
    text = snapshot.dumps(build_eager(g1), g1)
    with pytest.raises(snapshot.SnapshotError, match="different grammar"):
        snapshot.loads(text, g2)
    fsa = snapshot.loads(text, g2, force_rekernel=True)
    assert all(not s.expanded for s in fsa.states.values())
    expand_all(fsa, g2)
    assert equivalent(fsa, g2, build_eager(g2))


def test_force_rekernel_drops_missing_trees(g1, g2):
    text = snapshot.dumps(build_eager(g2), g2)
    fsa = snapshot.loads(text, g1, force_rekernel=True)
    assert all(i.tree != "gamma" for s in fsa.states.values() for i in s.kernel)
    assert parse(fsa, g1, toks("a e c")).accepted
    assert not parse(fsa, g1, toks("b e d")).accepted


def test_snapshot_without_grammar(g1):
    fsa = snapshot.loads(snapshot.dumps(build_eager(g1), g1))
    assert len(fsa) == len(build_eager(g1))


def test_bad_snapshots(g1):
    with pytest.raises(snapshot.SnapshotError):
        snapshot.loads("not json")
    data = snapshot.to_dict(build_eager(g1), g1)
    data["format_version"] = 99
    with pytest.raises(snapshot.SnapshotError):
        snapshot.from_dict(data)


# -- DOT ---------------------------------------------------------------------


def test_dot_golden_lazy(g1):
    assert export_dot(build_lazy(g1)) == (GOLDEN / "lazy_g1.dot").read_text()


def test_dot_golden_after_parse(g1):
    fsa = build_lazy(g1)
    parse(fsa, g1, toks("a e c"))
    text = export_dot(fsa)
    assert text == (GOLDEN / "g1_after_aec.dot").read_text()
    assert "peripheries=2" in text


def test_dot_stable(g2):
    assert export_dot(build_eager(g2)) == export_dot(build_eager(g2))


def test_dot_after_edit_is_disconnected(g1):
    fsa = build_eager(g1)
    apply_edit(fsa, g1, AddAuxiliary(GAMMA))
    text = export_dot(fsa)
    edges = [line.split() for line in text.splitlines() if "->" in line]
    edges = {(int(e[0][1:]), int(e[2][1:])) for e in edges}
    # follow the drawn edges from state 0
    seen, todo = {0}, [0]
    while todo:
        src = todo.pop()
        for a, b in edges:
            if a == src and b not in seen:
                seen.add(b)
                todo.append(b)
    drawn = {int(line.split()[0][1:]) for line in text.splitlines() if line.startswith("  s") and "->" not in line}
    assert drawn == set(fsa.states)
    assert drawn - seen  # nodes cut off from state 0's component
    assert text.count("style=bold") == 2  # the two rekerneled states


# -- workbench and REPL ------------------------------------------------------


def session(lines, g=None):
    bench = Workbench(g or fixtures.g1())
    out = io.StringIO()
    repl(bench, io.StringIO("\n".join(lines) + "\n"), out)
    return bench, out.getvalue().splitlines()


def test_repl_add_and_remove():
    bench, out = session(
        [
            ":parse a e c",
            ":add " + fixtures.GAMMA,
            ":parse a b e c d",
            ":stats",
            ":rm gamma",
            ":parse a b e c d",
        ]
    )
    assert out[0] == "accept"
    assert out[1].startswith("rekerneled states: 0")
    assert out[2] == "accept"
    stats = "\n".join(out[3:7])
    assert "reused" in stats
    assert bench.last_report is not None
    assert out[-1] == "reject"


def test_stats_after_edit():
    bench = Workbench(fixtures.g1())
    bench.parse(toks("a e c"))
    bench.add(fixtures.GAMMA)
    bench.parse(toks("a b e c d"))
    stats = bench.stats()
    assert stats.reused > 0
    assert stats.expanded + stats.kernel_form == stats.total
    assert stats.reachable + stats.unreachable == stats.total
    assert stats.expansions > 0


def test_repl_errors_do_not_abort():
    _, out = session([":add aux broken : (S (T*))", ":rm nope", ":frobnicate", ":parse e", ":quit", ":parse e"])
    assert out[0].startswith("error:") and "mismatch" in out[0]
    assert out[1].startswith("error:")
    assert out[2].startswith("unknown command")
    assert out[3] == "accept"
    assert len(out) == 4  # nothing after :quit


def test_repl_save_load_matches_in_memory(tmp_path):
    path = tmp_path / "t.json"
    a, out_a = session([":add " + fixtures.GAMMA, f":save {path}", f":load {path}", ":parse a b e c d", ":parse a b e d c"])
    b, out_b = session([":add " + fixtures.GAMMA, ":parse a b e c d", ":parse a b e d c"])
    assert out_a[-2:] == out_b[-2:] == ["accept", "reject"]


def test_repl_dot_purge(tmp_path):
    path = tmp_path / "g.dot"
    bench, out = session([":parse a e c", ":add " + fixtures.GAMMA, ":purge", f":dot {path}", ":grammar"])
    assert out[2].startswith("removed ") and out[2] != "removed 0 states"
    assert path.read_text().startswith("digraph fsa {")
    assert "aux gamma" in "\n".join(out)


def test_execute_bare_tokens():
    out = io.StringIO()
    assert execute(Workbench(fixtures.g1()), "a e c", out)
    assert out.getvalue() == "accept\n"


# -- command line ------------------------------------------------------------


def test_cli_parse(capsys):
    assert run(["parse", G1, "a", "e", "c"]) == 0
    assert run(["parse", G1, "a", "e"]) == 1
    assert run(["parse", G1, "--string", "a a e c c"]) == 0
    out = capsys.readouterr().out.split()
    assert out == ["accept", "reject", "accept"]


def test_cli_parse_trace_stats(capsys):
    assert run(["parse", G2, "a", "b", "e", "c", "d", "--trace", "--stats"]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines[0].startswith("step=1 action=shift a")
    assert "accept" in lines
    assert lines[-1].startswith("steps=")


def test_cli_usage_and_grammar_errors(tmp_path, capsys):
    assert run([]) == 2
    assert run(["parse"]) == 2
    assert run(["parse", str(tmp_path / "missing.tag"), "a"]) == 2
    bad = tmp_path / "bad.tag"
    bad.write_text('start S\naux b : (S "a" (T*))\n')
    assert run(["check", str(bad)]) == 2
    assert "mismatch" in capsys.readouterr().err


def test_cli_budget(monkeypatch):
    monkeypatch.setenv("TAGLR_STEP_BUDGET", "2")
    assert run(["parse", G1, "a", "e", "c"]) == 3


def test_cli_check_conflicts(capsys):
    assert run(["check", GC]) == 0
    out = capsys.readouterr().out
    assert "conflict in state" in out and "reduce <beta2" in out


def test_cli_oracle(capsys):
    assert run(["oracle", G2, "--maxlen", "5"]) == 0
    assert capsys.readouterr().out.splitlines() == ["e", "a e c", "b e d", "a a e c c", "a b e c d", "b b e d d"]
    assert run(["oracle", G2, "--maxlen", "4", "--compare"]) == 0
    assert capsys.readouterr().out.startswith("0 disagreements")


def test_cli_build_dot_purge(tmp_path, capsys):
    snap = tmp_path / "g1.json"
    assert run(["build", G1, "--mode", "lazy", "-o", str(snap)]) == 0
    assert run(["dot", str(snap)]) == 0
    assert capsys.readouterr().out == (GOLDEN / "lazy_g1.dot").read_text()
    assert run(["parse", G1, "a", "e", "c", "--table", str(snap), "--save-table"]) == 0
    assert run(["dot", str(snap), "-o", str(tmp_path / "out.dot")]) == 0
    assert (tmp_path / "out.dot").read_text() == (GOLDEN / "g1_after_aec.dot").read_text()
    assert run(["purge", str(snap)]) == 0
    assert capsys.readouterr().out.splitlines()[-1] == "removed 0 states"


def test_cli_purge_after_edit(tmp_path, capsys):
    g = fixtures.g1()
    fsa = build_eager(g)
    g, _ = apply_edit(fsa, g, AddAuxiliary(GAMMA))
    snap = tmp_path / "edited.json"
    snapshot.save(snap, fsa, g)
    assert run(["purge", str(snap)]) == 0
    removed = int(capsys.readouterr().out.split()[1])
    assert removed == len(fsa) - len(fsa.reachable()) > 0
    purged = snapshot.load(snap, g)
    assert purged.reachable() == set(purged.states)


def test_cli_table_mismatch(tmp_path):
    snap = tmp_path / "g1.json"
    assert run(["build", G1, "-o", str(snap)]) == 0
    assert run(["parse", G2, "b", "e", "d", "--table", str(snap)]) == 2
    assert run(["parse", G2, "b", "e", "d", "--table", str(snap), "--force-rekernel"]) == 0


def test_cli_build_describe(capsys):
    assert run(["build", G1]) == 0
    assert capsys.readouterr().out.startswith("state 0 (expanded)")


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "taglr", "parse", G1, "a", "e", "c"], capture_output=True, text=True
    )
    assert proc.returncode == 0 and proc.stdout.strip() == "accept"


def test_cli_repl_subcommand(monkeypatch, capsys):
    monkeypatch.setattr(sys, "stdin", io.StringIO(":parse a e c\n:quit\n"))
    assert run(["repl", G1]) == 0
    assert capsys.readouterr().out.strip() == "accept"


def test_digest_ignores_formatting_for_snapshots(tmp_path):
    snap = tmp_path / "s.json"
    assert run(["build", G1, "-o", str(snap)]) == 0
    reformatted = tmp_path / "g1.tag"
    reformatted.write_text("# same grammar, new layout\n\n" + fixtures.G1_TEXT.replace(" : ", "  :  "))
    assert parse_grammar_text(reformatted.read_text()).digest == fixtures.g1().digest
    assert run(["parse", str(reformatted), "e", "--table", str(snap)]) == 0
