from pathlib import Path

import pytest

from semgus.frontend import (
    FormatSortError,
    FormatSyntaxError,
    NotImpvSubgrammar,
    parse_problem,
    print_problem,
    subgrammar_of_impv,
    surface,
)
from semgus.frontend.impv import impv_ops, term_to_formula
from semgus.frontend.problem import ProblemError, UnknownProduction

from helpers import ROOT, problem, xor_witness

ALL_FILES = sorted(str(p.relative_to(ROOT / "problems")) for p in (ROOT / "problems").rglob("*.sem"))

HEADER = """(set-info :format 1)
(define-sort St (State (x Int)))
(declare-nonterminal E :input St :output Int)
(production 1 E var.x)
(production 2 E (+ E E))
(builtin-semantics impv)
"""


@pytest.mark.parametrize("rel", ALL_FILES)
def test_print_parse_round_trip(rel):
    p = problem(rel)
    again = parse_problem(print_problem(p))
    assert again == p


def test_xor_problem_shape():
    p = problem("xor_gex.sem")
    assert p.grammar.start == "Start"
    assert len(p.grammar.productions) == 9
    assert [ex.input for ex in p.spec.examples] == [(6, 9), (44, 247), (14, 15)]
    assert subgrammar_of_impv(p.grammar)
    shapes = {pid: op.shape for pid, op in impv_ops(p.grammar).items()}
    assert shapes == {1: "while", 2: "lt", 3: "seq", 4: "assign", 5: "assign", 6: "var", 7: "var",
                      8: "band", 9: "bor"}


def test_surface_syntax():
    p = problem("xor_gex.sem")
    assert surface(p.grammar, xor_witness()) == "while (x < y) do { x := (x | y) }"


def test_syntax_error_has_location():
    with pytest.raises(FormatSyntaxError) as e:
        parse_problem(HEADER + "(constraint (example :input ((x 1)) :output 2)\n")
    assert e.value.line > 0


def test_unknown_command():
    with pytest.raises(FormatSyntaxError, match="unknown command"):
        parse_problem(HEADER + "(frobnicate)\n")


def test_example_with_wrong_variables():
    with pytest.raises(FormatSortError):
        parse_problem(HEADER + "(constraint (example :input ((z 1)) :output 2))\n")


def test_spec_must_be_bool():
    with pytest.raises(FormatSortError):
        parse_problem(HEADER + "(constraint (spec (+ o x)))\n")


def test_examples_and_spec_are_exclusive():
    with pytest.raises(FormatSyntaxError):
        parse_problem(HEADER + "(constraint (example :input ((x 1)) :output 2))\n(constraint (spec (= o x)))\n")


def test_rule_for_unknown_production():
    text = HEADER.replace("(builtin-semantics impv)\n", "") + (
        "(rule 9 :vars ((G St) (t (Term E)) (v Int)) :constraint (= v 1) :head (sem_E G t v))\n")
    with pytest.raises(UnknownProduction):
        parse_problem(text)


def test_missing_rules_rejected():
    text = HEADER.replace("(builtin-semantics impv)\n", "") + "(constraint (example :input ((x 1)) :output 2))\n"
    with pytest.raises(ProblemError, match="no semantic rule"):
        parse_problem(text)


def test_non_impv_operator_rejected():
    text = HEADER.replace("(production 2 E (+ E E))", "(production 2 E (* E E))")
    with pytest.raises(NotImpvSubgrammar):
        parse_problem(text + "(constraint (example :input ((x 1)) :output 2))\n")


def test_term_to_formula_for_expressions():
    from semgus.core import formula as F
    from semgus.core.grammar import Term

    p = problem("max2.sem")
    st = p.input_sort
    t = Term(6, (Term(7, (Term(1), Term(2))), Term(2), Term(1)))  # if x < y then y else x
    f = term_to_formula(p.grammar, t, st)
    assert F.evaluate(f, {"x": 3, "y": 5}) == 5
    assert F.evaluate(f, {"x": 9, "y": 5}) == 9


def test_regex_problem_defaults():
    p = problem("desk/regex_a.sem")
    assert p.builtin[0] == "regex"
    ops = [prod.op for prod in p.grammar.productions]
    assert "char.0" in ops and "cat" in ops
