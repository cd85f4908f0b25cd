import random
from pathlib import Path

import pytest

from taglr import fixtures
from taglr.grammar import parse_grammar_text

ROOT = Path(__file__).resolve().parent.parent
GRAMMARS = ROOT / "grammars"
GOLDEN = Path(__file__).resolve().parent / "golden"


@pytest.fixture
def g1():
    return fixtures.g1()


@pytest.fixture
def g2():
    return fixtures.g2()


@pytest.fixture
def gc():
    return fixtures.g_conflict()


def toks(text):
    return tuple(text.split())


# -- small random grammars ---------------------------------------------------

LABELS = ["S", "T"]
TERMS = ["a", "b", "c"]


def _random_node(rng, label, depth, foot_label=None):
    n = rng.randint(1, 3)
    foot_at = rng.randrange(n) if foot_label else None
    kids = []
    for i in range(n):
        if i == foot_at:
            if depth > 0 and rng.random() < 0.5:
                kids.append(_random_node(rng, rng.choice(LABELS), depth - 1, foot_label))
            else:
                kids.append(f"({foot_label}*:na)")
        elif depth > 0 and rng.random() < 0.35:
            kids.append(_random_node(rng, rng.choice(LABELS), depth - 1))
        elif rng.random() < 0.08:
            kids.append("()")
        else:
            kids.append('"%s"' % rng.choice(TERMS))
    constraint = rng.choice(["", "", "", ":na"])
    return f"({label}{constraint} {' '.join(kids)})"


def random_grammar_text(seed):
    """Two labels, three terminals, 1-2 initial and 1-3 auxiliary trees."""
    rng = random.Random(seed)
    lines = ["start S"]
    for i in range(rng.randint(1, 2)):
        lines.append(f"initial a{i} : " + _random_node(rng, "S", 2))
    for i in range(rng.randint(1, 3)):
        label = rng.choice(LABELS)
        lines.append(f"aux b{i} : " + _random_node(rng, label, 2, label))
    return "\n".join(lines) + "\n"


def random_grammar(seed):
    return parse_grammar_text(random_grammar_text(seed))


def terminating_seeds(lo, hi):
    """Seeds whose auxiliary trees all carry a terminal (the driver is then total)."""
    out = []
    for s in range(lo, hi):
        g = random_grammar(s)
        if all(t.terminals() for t in g.auxiliary_trees):
            out.append(s)
    return out
