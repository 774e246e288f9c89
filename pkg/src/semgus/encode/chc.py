"""CHC programs and their SMT-LIB 2 (HORN) rendering."""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Iterable

from ..core import formula as F
from ..core.formula import App, Const, Formula, Var
from ..core.printer import formula_to_sexpr
from ..core.sexpr import write_symbol
from ..core.sorts import (
    ArraySort,
    BitVecSort,
    BoolSort,
    IntSort,
    ListSort,
    Sort,
    StateSort,
    TermSort,
    VectorSort,
)

QUERY = "Realizable"
LIST_SORT = "IntList"
# HORN mode has no built-in lists, so listings use a small datatype of their own.
LIST_DECL = f"(declare-datatypes (({LIST_SORT} 0)) (((nil) (insert (head Int) (tail {LIST_SORT})))))"


class Representation(str, enum.Enum):
    TREE = "tree"
    LIST = "list"
    ARRAY = "array"

    def __str__(self) -> str:
        return self.value


class UnsupportedSort(Exception):
    pass


@dataclass(frozen=True)
class Atom:
    relation: str
    args: tuple[Formula, ...] = ()

    def __str__(self) -> str:
        if not self.args:
            return self.relation
        return f"({self.relation} " + " ".join(map(str, self.args)) + ")"


@dataclass(frozen=True)
class Clause:
    """``constraint /\\ body => head``; a head of None means false."""

    vars: tuple[tuple[str, Sort], ...]
    body: tuple[Atom, ...]
    constraint: Formula
    head: Atom | None
    name: str = ""


def make_clause(body: Iterable[Atom], constraint: Formula, head: Atom | None, name: str = "") -> Clause:
    """Build a clause whose variables are exactly the free variables it mentions."""
    body = tuple(body)
    seen: dict[str, Sort] = {}
    parts: list[Formula] = list(head.args) if head else []
    for a in body:
        parts.extend(a.args)
    parts.append(constraint)
    for f in parts:
        _collect_vars(f, seen)
    return Clause(tuple(seen.items()), body, constraint, head, name)


def _collect_vars(f: Formula, out: dict[str, Sort]) -> None:
    if isinstance(f, Var):
        prev = out.setdefault(f.name, f.sort)
        if prev != f.sort:
            raise F.SortError(f"variable {f.name} used at sorts {prev} and {f.sort}")
    elif isinstance(f, App):
        for a in f.args:
            _collect_vars(a, out)


@dataclass(frozen=True)
class ChcProgram:
    relations: tuple[tuple[str, tuple[Sort, ...]], ...]
    clauses: tuple[Clause, ...]
    representation: Representation
    meta: tuple[tuple[str, object], ...] = ()
    datatypes: tuple[tuple[str, tuple[tuple[str, tuple[str, ...]], ...]], ...] = field(default=())

    @property
    def query_relation(self) -> str:
        return QUERY

    def relation_sorts(self) -> dict[str, tuple[Sort, ...]]:
        return dict(self.relations)

    def flags(self) -> dict[str, object]:
        return dict(self.meta)


def check_program(c: ChcProgram) -> None:
    """Relations declared and applied at the right sorts; exactly one goal clause."""
    decls = c.relation_sorts()
    goals = [cl for cl in c.clauses if cl.head is None]
    if len(goals) != 1 or [a.relation for a in goals[0].body] != [QUERY]:
        raise ValueError("a program needs exactly one clause Realizable => false")
    for cl in c.clauses:
        if cl.constraint.sort != F.BOOL:
            raise F.SortError(f"clause {cl.name}: constraint is not Bool")
        for a in cl.body + ((cl.head,) if cl.head else ()):
            if a.relation not in decls:
                raise ValueError(f"clause {cl.name}: undeclared relation {a.relation}")
            want = decls[a.relation]
            got = tuple(x.sort for x in a.args)
            if want != got:
                raise F.SortError(f"clause {cl.name}: {a.relation} applied at {got}, declared {want}")


# -- flattening of state sorts ------------------------------------------------


def component_sorts(s: Sort) -> list[Sort]:
    if isinstance(s, StateSort):
        out = []
        for _, fs in s.fields:
            out.extend(component_sorts(fs))
        return out
    if isinstance(s, VectorSort):
        raise UnsupportedSort(f"vector sort {s} must be flattened before emission")
    return [s]


def component_names(name: str, s: Sort) -> list[str]:
    if isinstance(s, StateSort):
        out = []
        for fname, fs in s.fields:
            out.extend(component_names(f"{name}.{fname}", fs))
        return out
    return [name]


def components(f: Formula) -> list[Formula]:
    """Scalar formulas, one per (nested) field of a state-sorted formula."""
    s = f.sort
    if not isinstance(s, StateSort):
        return [scalar(f)]
    if isinstance(f, Var):
        out = []
        for fname, fs in s.fields:
            out.extend(components(Var(f"{f.name}.{fname}", fs)))
        return out
    if isinstance(f, Const):
        out = []
        for (fname, fs), v in zip(s.fields, f.value):
            out.extend(components(Const(v, fs)))
        return out
    assert isinstance(f, App)
    if f.op == "state":
        out = []
        for a in f.args:
            out.extend(components(a))
        return out
    if f.op == "set-field":
        base = components(f.args[0])
        lo, hi = _span(s, f.index)
        return base[:lo] + components(f.args[1]) + base[hi:]
    if f.op == "get-field":
        parent = components(f.args[0])
        lo, hi = _span(f.args[0].sort, f.index)
        return parent[lo:hi]
    if f.op == "ite":
        c = scalar(f.args[0])
        return [F.ite(c, a, b) for a, b in zip(components(f.args[1]), components(f.args[2]))]
    raise UnsupportedSort(f"cannot flatten {f.op} of state sort")


def _span(s: StateSort, name: str) -> tuple[int, int]:
    lo = 0
    for fname, fs in s.fields:
        n = len(component_sorts(fs))
        if fname == name:
            return lo, lo + n
        lo += n
    raise KeyError(name)


def scalar(f: Formula) -> Formula:
    """Rewrite a scalar-sorted formula so no state-sorted subterm remains."""
    if isinstance(f.sort, VectorSort):
        raise UnsupportedSort(f"vector sort {f.sort} must be flattened before emission")
    if isinstance(f, (Var, Const)):
        if isinstance(f.sort, StateSort):
            raise UnsupportedSort("state value in scalar position")
        return f
    assert isinstance(f, App)
    if isinstance(f.sort, StateSort):
        raise UnsupportedSort("state value in scalar position")
    if f.op == "get-field":
        lo, _ = _span(f.args[0].sort, f.index)
        return components(f.args[0])[lo]
    if f.op in ("=", "distinct") and isinstance(f.args[0].sort, StateSort):
        cols = [components(a) for a in f.args]
        eqs = [F.app("=", *xs) for xs in zip(*cols)]
        both = F.conj(eqs)
        return both if f.op == "=" else F.neg(both)
    args = tuple(scalar(a) for a in f.args)
    if args == f.args:
        return f
    return App(f.op, args, f.index, f.declared)


def flatten_args(args: Iterable[Formula]) -> list[Formula]:
    out: list[Formula] = []
    for a in args:
        out.extend(components(a))
    return out


# -- emission ---------------------------------------------------------------


def datatype_name(nonterminal: str) -> str:
    return f"Term_{nonterminal}"


def sort_to_smt(s: Sort) -> str:
    if isinstance(s, IntSort):
        return "Int"
    if isinstance(s, BoolSort):
        return "Bool"
    if isinstance(s, BitVecSort):
        return f"(_ BitVec {s.width})"
    if isinstance(s, ArraySort):
        return "(Array Int Int)"
    if isinstance(s, ListSort):
        return LIST_SORT
    if isinstance(s, TermSort):
        return write_symbol(datatype_name(s.nonterminal))
    raise UnsupportedSort(f"no SMT-LIB rendering for sort {s}")


def _atom_text(a: Atom) -> str:
    args = flatten_args(a.args)
    if not args:
        return write_symbol(a.relation)
    return f"({write_symbol(a.relation)} " + " ".join(_smt(x) for x in args) + ")"


def _smt(f: Formula) -> str:
    return formula_to_sexpr(f).replace("(as nil (List Int))", "nil")


def clause_text(cl: Clause) -> str:
    parts = [_atom_text(a) for a in cl.body]
    c = scalar(cl.constraint)
    if not (isinstance(c, Const) and c.value is True):
        parts.append(_smt(c))
    head = _atom_text(cl.head) if cl.head is not None else "false"
    if not parts:
        body = head
    else:
        lhs = parts[0] if len(parts) == 1 else "(and " + " ".join(parts) + ")"
        body = f"(=> {lhs} {head})"
    decls = []
    for name, s in cl.vars:
        for n, cs in zip(component_names(name, s), component_sorts(s)):
            decls.append(f"({write_symbol(n)} {sort_to_smt(cs)})")
    if not decls:
        return body
    return "(forall (" + " ".join(decls) + ")\n  " + body + ")"


def emit_smtlib(c: ChcProgram) -> str:
    """SMT-LIB 2 HORN script; a pure function of the program."""
    check_program(c)
    lines = ["(set-logic HORN)"]
    flags = ", ".join(f"{k}={v}" for k, v in c.meta)
    lines.append(f"; representation={c.representation.value}" + (f", {flags}" if flags else ""))
    if c.representation is Representation.LIST:
        lines.append(LIST_DECL)
    if c.datatypes:
        heads = " ".join(f"({write_symbol(datatype_name(nt))} 0)" for nt, _ in c.datatypes)
        bodies = []
        for _, ctors in c.datatypes:
            cs = []
            for name, args in ctors:
                fields = "".join(f" ({write_symbol(f'{name}_{k + 1}')} {write_symbol(datatype_name(a))})"
                                 for k, a in enumerate(args))
                cs.append(f"({write_symbol(name)}{fields})")
            bodies.append("(" + " ".join(cs) + ")")
        lines.append(f"(declare-datatypes ({heads})\n  (" + "\n   ".join(bodies) + "))")
    for name, sorts in c.relations:
        flat = []
        for s in sorts:
            flat.extend(component_sorts(s))
        lines.append(f"(declare-fun {write_symbol(name)} (" + " ".join(sort_to_smt(s) for s in flat) + ") Bool)")
    for cl in c.clauses:
        if cl.name:
            lines.append(f"; {cl.name}")
        lines.append(f"(assert {clause_text(cl)})")
    lines.append("(check-sat)")
    return "\n".join(lines) + "\n"


__all__ = [
    "Representation", "Atom", "Clause", "ChcProgram", "UnsupportedSort", "make_clause", "check_program",
    "emit_smtlib", "components", "scalar", "flatten_args", "sort_to_smt", "datatype_name", "QUERY",
]
