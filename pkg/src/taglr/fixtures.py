"""Reference grammars used throughout the tests and demos.

``G1`` generates a^n e c^n.  ``G2`` adds ``gamma`` and generates
a^n b^m e c^n d^m.  ``G_CONFLICT`` duplicates ``beta`` under a second
name, which forces states holding two reduce-root actions.
"""

from .grammar import Grammar, parse_grammar_text, parse_tree_decl

ALPHA = 'initial alpha : (S "e")'
BETA = 'aux beta : (S:na "a" (S (S*:na) "c"))'
GAMMA = 'aux gamma : (S:na "b" (S:adj(gamma) (S*:na) "d"))'
BETA2 = 'aux beta2 : (S:na "a" (S (S*:na) "c"))'

G1_TEXT = f"""\
# a^n e c^n
start S
{ALPHA}
{BETA}
"""

G2_TEXT = G1_TEXT.replace("# a^n e c^n", "# a^n b^m e c^n d^m") + GAMMA + "\n"

G_CONFLICT_TEXT = G1_TEXT.replace("# a^n e c^n", "# a^n e c^n, beta duplicated") + BETA2 + "\n"

ALPHA_ONLY_TEXT = f"start S\n{ALPHA}\n"


def g1() -> Grammar:
    return parse_grammar_text(G1_TEXT)


def g2() -> Grammar:
    return parse_grammar_text(G2_TEXT)


def g_conflict() -> Grammar:
    return parse_grammar_text(G_CONFLICT_TEXT)


def alpha_only() -> Grammar:
    return parse_grammar_text(ALPHA_ONLY_TEXT)


def gamma_tree():
    return parse_tree_decl(GAMMA)
