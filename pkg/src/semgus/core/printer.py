"""SMT-LIB style rendering of sorts and formulas."""

from __future__ import annotations

from .formula import App, Const, Formula, Var
from .sexpr import write_symbol
from .sorts import ArraySort, BitVecSort, BoolSort, IntSort, ListSort, Sort, StateSort


def int_literal(v: int) -> str:
    return str(v) if v >= 0 else f"(- {-v})"


def bv_literal(v: int, width: int) -> str:
    return f"(_ bv{v} {width})"


def value_to_sexpr(value, sort: Sort) -> str:
    if isinstance(sort, BoolSort):
        return "true" if value else "false"
    if isinstance(sort, IntSort):
        return int_literal(value)
    if isinstance(sort, BitVecSort):
        return bv_literal(value, sort.width)
    if isinstance(sort, ArraySort):
        return "(" + " ".join(int_literal(v) for v in value) + ")"
    if isinstance(sort, ListSort):
        out = "(as nil (List Int))"
        for v in reversed(value):
            out = f"(insert {int_literal(v)} {out})"
        return out
    if isinstance(sort, StateSort):
        inner = " ".join(f"({n} {value_to_sexpr(v, s)})" for (n, s), v in zip(sort.fields, value))
        return f"({inner})"
    raise ValueError(f"cannot print value of sort {sort}")


def formula_to_sexpr(f: Formula) -> str:
    if isinstance(f, Var):
        return write_symbol(f.name)
    if isinstance(f, Const):
        if isinstance(f.sort, ArraySort):
            return "(array " + " ".join(int_literal(v) for v in f.value) + ")"
        return value_to_sexpr(f.value, f.sort)
    assert isinstance(f, App)
    if f.op == "nil":
        return "(as nil (List Int))"
    if f.op == "ctor":
        if not f.args:
            return write_symbol(f.index)
        return f"({write_symbol(f.index)} " + " ".join(formula_to_sexpr(a) for a in f.args) + ")"
    if f.op == "state":
        return "(state " + " ".join(formula_to_sexpr(a) for a in f.args) + ")"
    head = f.op
    if f.index is not None:
        head = f"{f.op} {write_symbol(f.index)}"
    if not f.args:
        return f"({head})"
    return f"({head} " + " ".join(formula_to_sexpr(a) for a in f.args) + ")"
