import subprocess
import sys

import pytest

from semgus.core.sexpr import parse_sexprs
from semgus.encode import (
    QUERY,
    Representation,
    build_query,
    check_program,
    emit_smtlib,
    encode,
    encode_syntax,
    fuse,
    make_abstract,
    make_bounded,
    vectorize,
)
from semgus.frontend import NotImpvSubgrammar
from semgus.frontend.problem import ProblemError

from helpers import ROOT, problem

GOLDEN = ROOT / "tests" / "golden" / "xor_array_fused_vectorized.smt2"


def xor():
    return problem("xor_gex.sem")


@pytest.mark.parametrize("rep", ["tree", "list", "array"])
@pytest.mark.parametrize("vectorized", [False, True])
def test_every_configuration_emits_a_checked_program(rep, vectorized):
    fused_options = [False] if rep == "tree" else [False, True]
    for fused in fused_options:
        prog = encode(xor(), rep, vectorized, fused)
        check_program(prog)
        text = emit_smtlib(prog)
        forms = parse_sexprs(text)
        assert forms[0] == ["set-logic", "HORN"]
        assert forms[-1] == ["check-sat"]
        assert f"(assert (=> {QUERY} false))" in text


def test_golden_emission():
    assert emit_smtlib(encode(xor(), "array", True, True)) == GOLDEN.read_text()


def test_emission_is_stable_across_processes():
    code = ("from semgus.frontend import load_problem\n"
            "from semgus.encode import encode, emit_smtlib\n"
            f"p = load_problem({str(ROOT / 'problems' / 'xor_gex.sem')!r})\n"
            "import sys; sys.stdout.write(emit_smtlib(encode(p, 'array', True, True)))\n")
    outs = set()
    for seed in ("0", "12345"):
        r = subprocess.run([sys.executable, "-c", code], capture_output=True, text=True, check=True,
                           env={"PYTHONHASHSEED": seed, "PATH": "/usr/bin:/bin"})
        outs.add(r.stdout)
    assert len(outs) == 1


def test_header_names_the_configuration():
    text = emit_smtlib(encode(xor(), "list", True, True))
    assert text.splitlines()[1] == "; representation=list, semantics=vectorized, fused=True, examples=3"
    assert "(declare-datatypes ((IntList 0))" in text


def test_tree_representation_declares_term_datatypes():
    text = emit_smtlib(encode(xor(), "tree"))
    assert "(declare-datatypes ((Term_Start 0) (Term_B 0) (Term_S 0) (Term_E 0))" in text
    assert "(p1 (p1_1 Term_B) (p1_2 Term_S))" in text


def test_syntax_clauses_one_per_production():
    g = xor().grammar
    for rep in Representation:
        assert len(encode_syntax(g, rep)) == len(g.productions)


def test_fusion_needs_a_listing():
    with pytest.raises(ValueError):
        fuse(xor(), "tree")
    with pytest.raises(ValueError):
        build_query(xor(), "tree", fused=True)


def test_prefix_constraint_only_for_listings():
    text = emit_smtlib(build_query(xor(), "array", prefix=(1, 2)))
    assert "(= (select __A 0) 1)" in text and "(= (select __A 1) 2)" in text
    with pytest.raises(ValueError):
        build_query(xor(), "tree", prefix=(1,))


def test_transforms_need_imperative_grammar():
    p = problem("triple_rules.sem")
    for transform in (vectorize, lambda q: make_abstract(q, 1), lambda q: make_bounded(q, 2)):
        with pytest.raises(NotImpvSubgrammar):
            transform(p)


def test_transforms_do_not_stack():
    v = vectorize(xor())
    with pytest.raises(ProblemError):
        vectorize(v)
    assert v.original is xor()


def test_abstract_query_constrains_the_tracked_bit():
    text = emit_smtlib(build_query(make_abstract(xor(), 3), "array", True))
    assert "bit=3" in text.splitlines()[1]


def test_bounded_query_carries_the_bound():
    text = emit_smtlib(build_query(make_bounded(xor(), 4), "list"))
    assert "bound=4" in text.splitlines()[1]
