"""Counterexample-guided inductive synthesis for logical specifications."""

from __future__ import annotations

import threading

from ..core import formula as F
from ..core.formula import Const, Var
from ..core.grammar import Term
from ..core.printer import formula_to_sexpr
from ..core.sexpr import BitVecLiteral, SExprSyntaxError, SList, parse_sexprs, write_symbol
from ..core.sorts import BitVecSort, BoolSort, IntSort
from ..encode.chc import Representation, scalar, sort_to_smt
from ..frontend.impv import NotVerifiableSpec, impv_ops, term_to_formula
from ..frontend.problem import OUTPUT_VAR, Example, Problem, ProblemError, Specification, instantiate
from ..interp.api import eval as run_term
from ..interp.engine import DEFAULT_FUEL, DIVERGED
from .driver import SolverConfig, SolverError, SolverNotFound, SolverTimeout, run_script
from .result import SolveResult
from .strategies import chc_solve, enumerate_solve

DEFAULT_MAX_ITER = 32


def _check_verifiable(p: Problem) -> None:
    if p.spec.kind != "formula" or not p.spec.verifiable:
        raise NotVerifiableSpec("CEGIS needs a verifiable logical specification")
    if p.variant.kind != "standard" or p.builtin != ("impv",):
        raise NotVerifiableSpec("CEGIS needs the built-in imperative semantics over expressions")
    st = p.input_sort
    for _, s in st.fields:
        if not isinstance(s, (IntSort, BitVecSort, BoolSort)):
            raise NotVerifiableSpec(f"input field of sort {s} cannot be verified")
    ops = impv_ops(p.grammar, st)
    if any(op.kind == "stmt" for op in ops.values()):
        raise NotVerifiableSpec("statement semantics cannot be checked against a formula")


def _zero(s):
    if isinstance(s, BoolSort):
        return False
    return 0


def verification_script(p: Problem, t: Term, with_model: bool = True) -> str:
    """SMT-LIB query for an input on which ``t`` violates the specification.

    z3 reports an error for get-value after unsat, so the model request is
    optional and only sent once the query is known to be satisfiable.
    """
    st = p.input_sort
    body = term_to_formula(p.grammar, t, st)
    bad = F.neg(instantiate(p.spec.formula, body, {}, {}))
    lines = ["(set-logic ALL)"]
    for name, s in st.fields:
        lines.append(f"(declare-const {write_symbol(name)} {sort_to_smt(s)})")
    lines.append(f"(assert {formula_to_sexpr(scalar(bad))})")
    lines.append("(check-sat)")
    if with_model:
        names = " ".join(write_symbol(n) for n in st.names)
        lines.append(f"(get-value ({names}))")
    return "\n".join(lines) + "\n"


def _model_value(x, s):
    """Read one get-value entry, refusing values the sort cannot represent."""
    if isinstance(s, BoolSort):
        if x in ("true", "false"):
            return x == "true"
    elif isinstance(s, BitVecSort):
        if isinstance(x, BitVecLiteral):
            if x.width != s.width:
                raise SolverError(f"model value of width {x.width} for {s}")
            return x.value
    elif isinstance(s, IntSort):
        if isinstance(x, int):
            return int(x)
        if isinstance(x, list) and len(x) == 2 and x[0] == "-" and isinstance(x[1], int):
            return -int(x[1])
    raise SolverError(f"cannot read model value {x!r} at sort {s}")


def parse_model(text: str, p: Problem) -> tuple | None:
    """None for unsat; the counterexample input tuple for sat."""
    try:
        forms = parse_sexprs(text)
    except SExprSyntaxError as e:
        raise SolverError(text) from e
    if not forms or forms[0] not in ("sat", "unsat", "unknown"):
        raise SolverError(text)
    if forms[0] == "unsat":
        return None
    if forms[0] == "unknown":
        raise SolverError("verifier returned unknown")
    if len(forms) < 2 or not isinstance(forms[1], SList):
        raise SolverError(text)
    values = {}
    for entry in forms[1]:
        if not isinstance(entry, list) or len(entry) != 2:
            raise SolverError(text)
        values[str(entry[0])] = entry[1]
    st = p.input_sort
    out = []
    for name, s in st.fields:
        out.append(_model_value(values[name], s) if name in values else _zero(s))
    return tuple(out)


def verify(p: Problem, t: Term, cfg: SolverConfig, cancel=None) -> tuple | None:
    out, _ = run_script(verification_script(p, t, with_model=False), cfg, cancel)
    if out.split()[:1] == ["unsat"]:
        return None
    out, _ = run_script(verification_script(p, t), cfg, cancel)
    return parse_model(out, p)


def _violates(p: Problem, t: Term, inputs: tuple, fuel: int) -> bool:
    st = p.input_sort
    o = Var(OUTPUT_VAR, p.output_sort)
    out = run_term(p, t, inputs, fuel)
    if out is DIVERGED:
        return True
    psi = Example(inputs, formula=p.spec.formula).constraint(Const(out, o.sort), st)
    return not F.evaluate(psi, {})


def _inputs(examples) -> tuple:
    return tuple(e.input for e in examples)


def cegis(p: Problem, backend: str = "enum", max_iter: int = DEFAULT_MAX_ITER, cfg: SolverConfig | None = None,
          rep=Representation.ARRAY, max_size: int = 8, fuel: int = DEFAULT_FUEL,
          cancel: threading.Event | None = None) -> SolveResult:
    """Alternate example-based solving with SMT verification of each candidate."""
    _check_verifiable(p)
    if backend not in ("enum", "chc"):
        raise ValueError(f"unknown CEGIS backend {backend!r}")
    cfg = cfg or SolverConfig()
    label = f"cegis/{backend}"
    psi = p.spec.formula
    st = p.input_sort
    examples = [Example(tuple(_zero(s) for _, s in st.fields), formula=psi)]
    for _ in range(max_iter):
        sub = p.replace(spec=Specification(tuple(examples)))
        if backend == "enum":
            r = enumerate_solve(sub, max_size, fuel, cancel)
        else:
            r = chc_solve(sub, rep, cfg=cfg, fuel=fuel, cancel=cancel)
        if r.kind != "realizable":
            return SolveResult(r.kind, None, "", r.reason, r.detail, label, _inputs(examples),
                               {**r.stats, "iterations": len(examples)})
        try:
            cex = verify(p, r.term, cfg, cancel)
        except SolverTimeout as err:
            return SolveResult.unknown("timeout", str(err), strategy=label, examples=_inputs(examples))
        except (SolverError, SolverNotFound) as err:
            return SolveResult.unknown("solverError", str(err), strategy=label, examples=_inputs(examples))
        if cex is None:
            return SolveResult.realizable(r.term, r.source, strategy=label,
                                          examples=_inputs(examples),
                                          stats={"iterations": len(examples)})
        if not _violates(p, r.term, cex, fuel):
            raise SolverError(f"counterexample {cex} does not refute the candidate")
        if any(e.input == cex for e in examples):
            raise ProblemError(f"counterexample {cex} repeats a known example")
        examples.append(Example(cex, formula=psi))
    return SolveResult.unknown("iterationLimit", f"no answer after {max_iter} rounds", strategy=label,
                               examples=_inputs(examples))


__all__ = ["cegis", "verify", "verification_script", "parse_model", "DEFAULT_MAX_ITER"]
