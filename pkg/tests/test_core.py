import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from semgus.core import formula as F
from semgus.core.formula import Const, Var
from semgus.core.grammar import (
    Grammar,
    MalformedTerm,
    ParseFailure,
    Production,
    Term,
    TermEnumerator,
    TrailingSymbols,
    listing_to_term,
    pending_nonterminals,
    term_size,
    term_to_listing,
    validate_grammar,
)
from semgus.core.sexpr import SExprSyntaxError, parse_sexprs, write_sexpr
from semgus.core.sorts import BOOL, INT, bv, state

from helpers import problem, random_term


def gex():
    return problem("xor_gex.sem").grammar


# -- grammars ----------------------------------------------------------------


def test_gex_is_valid():
    assert validate_grammar(gex()).ok


def test_validation_reports_each_problem():
    g = Grammar({"A": INT}, "A", [Production(1, "A", "f", ("A",)), Production(1, "A", "g", ("C",))])
    kinds = validate_grammar(g).kinds()
    assert {"duplicate-id", "undeclared-nonterminal"} <= kinds
    g2 = Grammar({"A": INT}, "A", [Production(1, "A", "f", ("A",))])
    assert validate_grammar(g2).kinds() == {"unproductive"}


def test_min_sizes_on_gex():
    g = gex()
    assert g.min_sizes == {"Start": 6, "B": 3, "S": 2, "E": 1}
    assert g.production_min_size(3) == 5


def _brute_force(g, nt, size):
    """All terms of exactly ``size`` by direct recursion over compositions."""
    out = []
    for p in g.by_lhs[nt]:
        if not p.rhs:
            if size == 1:
                out.append(Term(p.id))
            continue
        for parts in itertools.product(range(1, size), repeat=len(p.rhs)):
            if sum(parts) != size - 1:
                continue
            pools = [_brute_force(g, a, s) for a, s in zip(p.rhs, parts)]
            out.extend(Term(p.id, kids) for kids in itertools.product(*pools))
    return out


@pytest.mark.parametrize("size", range(1, 8))
def test_enumerator_matches_brute_force(size):
    g = gex()
    for nt in g.nonterminals:
        got = TermEnumerator(g).of_size(nt, size)
        want = _brute_force(g, nt, size)
        assert sorted(map(repr, got)) == sorted(map(repr, want))
        assert [term_to_listing(g, t) for t in got] == sorted(term_to_listing(g, t) for t in got)


def test_enumeration_counts_for_e():
    # Two leaves and two binary operators: size 2n+1 has 2^(n+1) * 2^n * Catalan(n) terms.
    g = gex()
    enum = TermEnumerator(g)
    assert [len(enum.of_size("E", n)) for n in (1, 3, 5, 7)] == [2, 8, 64, 640]


# -- listings ----------------------------------------------------------------


def test_listing_of_the_xor_witness():
    from helpers import xor_witness

    g = gex()
    assert term_to_listing(g, xor_witness()) == (1, 2, 6, 7, 4, 9, 6, 7)


def test_listing_errors():
    g = gex()
    with pytest.raises(ParseFailure) as e:
        listing_to_term(g, "Start", (1, 2, 6))
    assert e.value.position == 3
    with pytest.raises(TrailingSymbols):
        listing_to_term(g, "E", (6, 7))
    with pytest.raises(MalformedTerm):
        term_to_listing(g, Term(9, (Term(6),)))


def test_pending_nonterminals():
    g = gex()
    assert pending_nonterminals(g, "Start", ()) == ["Start"]
    assert pending_nonterminals(g, "Start", (1,)) == ["B", "S"]
    assert pending_nonterminals(g, "Start", (1, 2, 6)) == ["E", "S"]
    assert pending_nonterminals(g, "Start", (1, 2, 6, 7, 4, 6)) == []
    assert pending_nonterminals(g, "Start", (2,)) is None


@settings(max_examples=200, deadline=None)
@given(st.randoms(use_true_random=False), st.integers(6, 25))
def test_listing_round_trip_random(rng, size):
    g = gex()
    t = random_term(g, "Start", size, rng)
    assert term_size(t) <= size
    assert listing_to_term(g, "Start", term_to_listing(g, t)) == t


# -- formulas ------------------------------------------------------------------


def test_bitvector_semantics_wrap_and_compare_signed():
    x = Var("x", bv(8))
    f = F.app("bvadd", x, Const(1, bv(8)))
    assert F.evaluate(f, {"x": 255}) == 0
    assert F.evaluate(F.app("bvslt", Const(255, bv(8)), Const(0, bv(8))), {}) is True


def test_state_fields():
    s = state(("x", INT), ("b", BOOL))
    g = Var("G", s)
    f = F.set_field("x", g, F.app("+", F.get_field("x", g), Const(2, INT)))
    assert F.evaluate(f, {"G": (1, True)}) == (3, True)


def test_sort_errors():
    with pytest.raises(F.SortError):
        F.app("+", Const(1, INT), Const(True, BOOL))


# -- s-expressions ---------------------------------------------------------------


def test_sexpr_round_trip():
    text = '(a (b 1 (- 2)) :k "s""q" #b0101 #x0f |odd name|)'
    forms = parse_sexprs(text)
    again = parse_sexprs(write_sexpr(forms[0]))
    assert write_sexpr(again[0]) == write_sexpr(forms[0])


def test_sexpr_errors_carry_location():
    with pytest.raises(SExprSyntaxError) as e:
        parse_sexprs("(a\n (b c)")
    assert e.value.line >= 1
    with pytest.raises(SExprSyntaxError):
        parse_sexprs(")")
