import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from semgus.core.grammar import Term
from semgus.interp import (
    BOTTOM,
    DIVERGED,
    TOP,
    UNDEFINED,
    alpha,
    check_examples,
    eval,
    eval_abstract,
    eval_bounded,
    eval_vectorized,
    in_gamma,
    regex_accepts,
    regex_matrix,
)
from semgus.frontend.regex import regex_grammar

from helpers import problem, random_term, xor_witness

X, Y = Term(6), Term(7)


def gex():
    return problem("xor_gex.sem")


def test_witness_runs_once():
    assert eval(gex(), xor_witness(), (6, 9)) == (15, 9)


def test_expression_terms_evaluate():
    assert eval(gex(), Term(8, (X, Y)), (12, 10)) == 8


def test_loop_that_never_exits_diverges():
    # while (x < y) do { y := y | x } with y already above x never changes the guard.
    t = Term(1, (Term(2, (X, Y)), Term(5, (Term(9, (Y, X)),))))
    assert eval(gex(), t, (1, 2), fuel=500) is DIVERGED


def test_check_examples():
    assert check_examples(problem("xor_one_example.sem"), xor_witness())
    assert not check_examples(gex(), xor_witness())


def test_vectorized_matches_entries():
    vals = [(6, 9), BOTTOM, (14, 15)]
    assert eval_vectorized(gex(), xor_witness(), vals) == [(15, 9), BOTTOM, (15, 15)]
    assert eval_vectorized(gex(), xor_witness(), [BOTTOM, BOTTOM]) == [BOTTOM, BOTTOM]


def test_abstract_bit_three():
    p = gex()
    start = alpha((14, 15), 3)
    assert start == (1, 1)
    assert eval_abstract(p, xor_witness(), start, 3, "join") == (1, 1)
    assert eval_abstract(p, xor_witness(), start, 3, "havoc") == (TOP, TOP)
    # Any Top operand makes & and | Top, even where the other operand would decide the bit.
    assert eval_abstract(p, Term(8, (X, Y)), (1, TOP), 3) == TOP
    assert eval_abstract(p, Term(9, (X, Y)), (1, TOP), 3) == TOP
    assert eval_abstract(p, Term(9, (X, Y)), (0, 1), 3) == 1


def test_alpha_is_one_based():
    assert alpha(4, 3) == 1 and alpha(4, 1) == 0 and alpha(1, 1) == 1
    assert in_gamma(4, TOP, 1) and in_gamma(4, 1, 3) and not in_gamma(4, 0, 3)
    with pytest.raises(ValueError):
        eval_abstract(gex(), xor_witness(), (0, 0), 0)


def test_bounded_loop_budget():
    p = gex()
    assert eval_bounded(p, xor_witness(), (6, 9), 0) is UNDEFINED
    assert eval_bounded(p, xor_witness(), (6, 9), 1) is UNDEFINED
    assert eval_bounded(p, xor_witness(), (6, 9), 2) == (15, 9)
    # A loop whose guard is false at once needs no iterations, only a positive budget.
    assert eval_bounded(p, xor_witness(), (9, 6), 1) == (9, 6)


@settings(max_examples=150, deadline=None)
@given(st.randoms(use_true_random=False), st.integers(-64, 63), st.integers(-64, 63), st.integers(-64, 63))
def test_bounded_agrees_when_defined(rng, x, y, z):
    p = problem("impv_bv.sem")
    t = random_term(p.grammar, "S", 10, rng)
    full = eval(p, t, (x, y, z), fuel=2000)
    for k in (1, 3, 6):
        b = eval_bounded(p, t, (x, y, z), k, fuel=2000)
        if b is not UNDEFINED and b is not DIVERGED and full is not DIVERGED:
            assert b == full


def _naive(r, g, s):
    """Set of (i, j) with s[i:j] matched by r, by direct recursion on the regex."""
    op = g.production(r.prod).op
    n = len(s)
    if op.startswith("char."):
        c = int(op.split(".")[1])
        return {(i, i + 1) for i in range(n) if s[i] == c}
    if op == "eps":
        return {(i, i) for i in range(n + 1)}
    if op == "empty":
        return set()
    if op == "alt":
        return _naive(r.children[0], g, s) | _naive(r.children[1], g, s)
    if op == "cat":
        a, b = _naive(r.children[0], g, s), _naive(r.children[1], g, s)
        return {(i, k) for i, j in a for j2, k in b if j == j2}
    if op == "star":
        a = _naive(r.children[0], g, s)
        reach = {(i, i) for i in range(n + 1)}
        while True:
            more = reach | {(i, k) for i, j in reach for j2, k in a if j == j2}
            if more == reach:
                return reach
            reach = more
    raise AssertionError(op)


@settings(max_examples=300, deadline=None)
@given(st.randoms(use_true_random=False), st.lists(st.integers(0, 1), max_size=5))
def test_regex_matrix_random(rng, s):
    g = regex_grammar(2, max_len=5)
    r = random_term(g, "R", 9, rng)
    m = regex_matrix(g, r, s)
    pairs = _naive(r, g, s)
    for i in range(len(s) + 1):
        for j in range(i, len(s) + 1):
            assert m[i][j] == ((i, j) in pairs)
    assert regex_accepts(g, r, s) == ((0, len(s)) in pairs)


def test_regex_checker_on_problem():
    p = problem("desk/regex_a.sem")
    a = Term(1)
    assert check_examples(p, a)
    assert not check_examples(p, Term(2))


def test_vectorized_random_small():
    p = problem("impv_bv.sem")
    rng = random.Random(7)
    for _ in range(50):
        t = random_term(p.grammar, "S", 8, rng)
        ins = [tuple(rng.randint(-8, 8) for _ in range(3)) for _ in range(3)]
        singles = [eval(p, t, v, fuel=1000) for v in ins]
        if DIVERGED in singles:
            continue
        assert eval_vectorized(p, t, ins, fuel=4000) == singles
