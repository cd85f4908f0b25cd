import dataclasses

import pytest

from taglr import fixtures
from taglr.engine import parse
from taglr.grammar import ROOT, parse_tree_decl
from taglr.items import LA, DottedItem, Right, Term
from taglr.lazy import (
    AddAuxiliary,
    AddInitial,
    EditError,
    Remove,
    add_edit,
    apply_edit,
    build_lazy,
    ensure_expanded,
    equivalent,
    expand_all,
    purge_unreachable,
    rekernel_sound,
)
from taglr.table import EXPANDED, KERNEL_FORM, build_eager

from conftest import random_grammar, toks

GAMMA = parse_tree_decl(fixtures.GAMMA)


def test_build_lazy(g1):
    fsa = build_lazy(g1)
    assert len(fsa) == 1
    assert fsa[0].status == KERNEL_FORM
    assert fsa[0].kernel == {DottedItem("alpha", ROOT, LA)}


def test_build_lazy_ignores_auxiliary(g1, g2):
    assert build_lazy(g2)[0].kernel == build_lazy(g1)[0].kernel


def test_ensure_expanded(g1):
    fsa = build_lazy(g1)
    rec = ensure_expanded(fsa, g1, 0)
    assert rec.expanded and rec.added == 5
    assert len(fsa[0].closure) == 6
    assert set(fsa[0].transitions) == {Term("a"), Term("e"), Right("beta", "alpha", ROOT)}
    assert sorted(rec.created) == [1, 2, 3] and rec.reused == []
    assert all(fsa[s].status == KERNEL_FORM for s in rec.created)
    again = ensure_expanded(fsa, g1, 0)
    assert not again.expanded and again.added == 0 and again.created == []


def test_version_mismatch_reexpands(g1):
    fsa = build_eager(g1)
    fsa[0].version = -1
    assert ensure_expanded(fsa, g1, 0).expanded


def test_lazy_parse_expands_on_demand(g1):
    fsa = build_lazy(g1)
    first = parse(fsa, g1, toks("a e c"))
    assert first.accepted
    assert first.stats.expansions >= 4
    second = parse(fsa, g1, toks("a e c"))
    assert second.accepted and second.stats.expansions == 0
    expanded = {sid for sid, s in fsa.states.items() if s.status == EXPANDED}
    eager = build_eager(g1)
    visited = parse(eager, g1, toks("a e c")).visited
    assert len(expanded) == len(visited)
    assert {fsa[s].kernel for s in expanded} == {eager[s].kernel for s in visited}


def test_expand_all_matches_eager(g1, g2, gc):
    for g in (g1, g2, gc):
        fsa = build_lazy(g)
        expand_all(fsa, g)
        assert len(fsa) == len(build_eager(g))
        assert equivalent(fsa, g, build_eager(g))


def test_equivalent(g1, g2):
    assert equivalent(build_eager(g1), g1, build_eager(g1))
    assert not equivalent(build_eager(g1), g1, build_eager(g2))
    fsa = build_eager(g2)
    assert equivalent(fsa, g2, fsa)


def test_add_gamma(g1, g2):
    fsa = build_eager(g1)
    old = fsa.copy()
    new, report = apply_edit(fsa, g1, AddAuxiliary(GAMMA))
    assert new == g2 and new.version == g1.version + 1
    assert {0, 1} <= report.rekerneled
    assert all(fsa[s].status == KERNEL_FORM for s in report.rekerneled)
    assert report.retained_unreachable >= 1
    assert len(fsa.reachable()) < len(fsa)
    assert rekernel_sound(old, fsa, new, report) == []
    # untouched states keep their ids and contents
    for sid, state in old.states.items():
        if sid not in report.rekerneled:
            kept = fsa[sid]
            assert (kept.kernel, kept.closure, kept.transitions, kept.actions) == (
                state.kernel, state.closure, state.transitions, state.actions
            )
    expand_all(fsa, new)
    assert equivalent(fsa, new, build_eager(g2))
    assert any(fsa[s].kernel == old[s].kernel for s in old.states)


def test_add_gamma_to_lazy(g1, g2):
    fsa = build_lazy(g1)
    parse(fsa, g1, toks("a e c"))
    new, report = apply_edit(fsa, g1, AddAuxiliary(GAMMA))
    assert 0 in report.rekerneled
    out = parse(fsa, new, toks("a b e c d"))
    assert out.accepted
    expand_all(fsa, new)
    assert equivalent(fsa, new, build_eager(g2))


def test_reuse_after_edit(g1):
    fsa = build_eager(g1)
    before = {s.kernel: sid for sid, s in fsa.states.items()}
    new, _ = apply_edit(fsa, g1, AddAuxiliary(GAMMA))
    records = expand_all(fsa, new)
    reused = {t for r in records for t in r.reused}
    assert any(fsa[t].kernel in before for t in reused)
    # no kernel is ever interned twice
    kernels = [s.kernel for s in fsa.states.values()]
    assert len(kernels) == len(set(kernels))


def test_remove_gamma(g1, g2):
    fsa = build_eager(g2)
    old = fsa.copy()
    new, report = apply_edit(fsa, g2, Remove("gamma"))
    assert new == g1
    assert rekernel_sound(old, fsa, new, report) == []
    assert all("gamma" not in str(i) for s in fsa.states.values() for i in s.items())
    expand_all(fsa, new)
    assert equivalent(fsa, new, build_eager(g1))


def test_round_trip_edits(g1):
    fsa = build_eager(g1)
    g2_, _ = apply_edit(fsa, g1, AddAuxiliary(GAMMA))
    g1_, report = apply_edit(fsa, g2_, Remove("gamma"))
    # nothing was re-expanded in between, so no state has seen gamma yet
    assert report.rekerneled == report.deleted == set()
    expand_all(fsa, g1_)
    assert equivalent(fsa, g1_, build_eager(g1))


def test_add_initial():
    g = fixtures.alpha_only()
    fsa = build_eager(g)
    tree = parse_tree_decl('initial alpha2 : (S "f")')
    new, report = apply_edit(fsa, g, AddInitial(tree))
    assert 0 in report.rekerneled
    assert DottedItem("alpha2", ROOT, LA) in fsa[0].kernel
    assert parse(fsa, new, toks("f")).accepted
    expand_all(fsa, new)
    assert equivalent(fsa, new, build_eager(new))


def test_add_initial_left_completion(g1):
    # beta can adjoin at the new tree's root, so states with beta's foot item are affected
    fsa = build_eager(g1)
    old = fsa.copy()
    tree = parse_tree_decl('initial alpha2 : (S "f" "g")')
    new, report = apply_edit(fsa, g1, add_edit(tree))
    assert {0, 1} <= report.rekerneled
    assert rekernel_sound(old, fsa, new, report) == []
    assert parse(fsa, new, toks("a f g c")).accepted


def test_edit_errors(g1):
    fsa = build_eager(g1)
    with pytest.raises(EditError):
        apply_edit(fsa, g1, Remove("gamma"))
    with pytest.raises(EditError):
        apply_edit(fsa, g1, AddAuxiliary(parse_tree_decl(fixtures.BETA)))  # name in use
    with pytest.raises(EditError):
        apply_edit(fsa, g1, AddInitial(GAMMA))  # wrong kind
    with pytest.raises(EditError):
        apply_edit(fsa, g1, Remove("alpha"))  # leaves no start tree
    dangling = dataclasses.replace(GAMMA, name="delta")
    with pytest.raises(EditError, match="unresolved"):
        apply_edit(fsa, g1, AddAuxiliary(dangling))
    assert fsa == build_eager(g1)  # failed edits leave the table alone
    with pytest.raises(TypeError):
        apply_edit(fsa, g1, "gamma")


def test_purge(g1):
    fsa = build_eager(g1)
    assert purge_unreachable(fsa) == 0
    new, _ = apply_edit(fsa, g1, AddAuxiliary(GAMMA))
    removed = purge_unreachable(fsa)
    assert removed > 0
    assert purge_unreachable(fsa) == 0
    assert fsa.reachable() == set(fsa.states)
    assert set(fsa.by_kernel.values()) == set(fsa.states)
    expand_all(fsa, new)
    assert equivalent(fsa, new, build_eager(new))


def test_report_text(g1):
    fsa = build_eager(g1)
    _, report = apply_edit(fsa, g1, AddAuxiliary(GAMMA))
    assert str(report).startswith("rekerneled states: 0, 1;")


def _edits_for(seed):
    g = random_grammar(seed)
    other = random_grammar(seed + 10_000)
    for t in other:
        yield g, dataclasses.replace(t, name=t.name + "x")


@pytest.mark.parametrize("seed", range(0, 30))
def test_random_edits_sound(seed):
    for g, tree in _edits_for(seed):
        for fsa in (build_eager(g), build_lazy(g)):
            old = fsa.copy()
            try:
                new, report = apply_edit(fsa, g, add_edit(tree))
            except EditError:
                continue
            assert rekernel_sound(old, fsa, new, report) == []
            assert equivalent(fsa, new, build_eager(new))
            for name in sorted(t.name for t in new):
                trial = fsa.copy()
                before = trial.copy()
                try:
                    back, rep = apply_edit(trial, new, Remove(name))
                except EditError:
                    continue
                assert rekernel_sound(before, trial, back, rep) == []
                assert equivalent(trial, back, build_eager(back))
