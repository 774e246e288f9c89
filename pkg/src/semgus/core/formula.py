"""Theory formulas: the constraint language of semantic rules and CHC clauses.

Formulas are immutable trees of :class:`Var`, :class:`Const` and :class:`App`
nodes.  Every node is sort-checked when it is built, so a formula that exists
is well-sorted; operator names follow SMT-LIB spellings.

Runtime values are plain Python objects: ``int`` for Int, ``bool`` for Bool,
``int`` in ``[0, 2**w)`` for ``(BitVec w)``, ``tuple[int, ...]`` for arrays
and lists, and a tuple in field order for states.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Callable, Iterable, Mapping

from .sorts import (
    ARRAY,
    BOOL,
    INT,
    LIST,
    ArraySort,
    BitVecSort,
    BoolSort,
    IntSort,
    ListSort,
    Sort,
    StateSort,
    TermSort,
)


class SortError(Exception):
    pass


class EvaluationError(Exception):
    pass


class ArrayBoundsError(EvaluationError):
    pass


class Formula:
    sort: Sort

    def free_vars(self) -> frozenset[str]:
        raise NotImplementedError


@dataclass(frozen=True)
class Var(Formula):
    name: str
    sort: Sort

    def free_vars(self) -> frozenset[str]:
        return frozenset((self.name,))

    def __str__(self) -> str:
        return self.name


@dataclass(frozen=True)
class Const(Formula):
    value: Any
    sort: Sort

    def __post_init__(self):
        object.__setattr__(self, "value", coerce_value(self.value, self.sort))

    def free_vars(self) -> frozenset[str]:
        return frozenset()

    def __str__(self) -> str:
        from .printer import formula_to_sexpr

        return formula_to_sexpr(self)


@dataclass(frozen=True)
class App(Formula):
    op: str
    args: tuple[Formula, ...] = ()
    index: str | None = None
    declared: Sort | None = None
    sort: Sort = field(init=False, compare=False, repr=False)
    _fv: frozenset = field(init=False, compare=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "args", tuple(self.args))
        rule = _SIGNATURES.get(self.op)
        if rule is None:
            raise SortError(f"unknown operator {self.op!r}")
        object.__setattr__(self, "sort", rule(self))
        fv = frozenset().union(*(a.free_vars() for a in self.args)) if self.args else frozenset()
        object.__setattr__(self, "_fv", fv)

    def free_vars(self) -> frozenset[str]:
        return self._fv

    def __str__(self) -> str:
        from .printer import formula_to_sexpr

        return formula_to_sexpr(self)


# -- values ---------------------------------------------------------------


def coerce_value(value: Any, sort: Sort) -> Any:
    """Normalise a Python value to the canonical runtime form for ``sort``."""
    if isinstance(sort, BoolSort):
        if not isinstance(value, bool):
            raise SortError(f"expected Bool value, got {value!r}")
        return value
    if isinstance(sort, IntSort):
        if isinstance(value, bool) or not isinstance(value, int):
            raise SortError(f"expected Int value, got {value!r}")
        return value
    if isinstance(sort, BitVecSort):
        if isinstance(value, bool) or not isinstance(value, int):
            raise SortError(f"expected bit-vector value, got {value!r}")
        return value % (1 << sort.width)
    if isinstance(sort, (ArraySort, ListSort)):
        vals = tuple(value)
        if any(isinstance(v, bool) or not isinstance(v, int) for v in vals):
            raise SortError(f"expected integer sequence, got {value!r}")
        return vals
    if isinstance(sort, StateSort):
        if isinstance(value, Mapping):
            if set(value) != set(sort.names):
                raise SortError(f"state value keys {sorted(value)} != {list(sort.names)}")
            value = [value[n] for n in sort.names]
        vals = tuple(value)
        if len(vals) != len(sort.fields):
            raise SortError(f"state value has {len(vals)} entries, sort has {len(sort.fields)}")
        return tuple(coerce_value(v, s) for v, (_, s) in zip(vals, sort.fields))
    raise SortError(f"no runtime values for sort {sort}")


def to_signed(value: int, width: int) -> int:
    value %= 1 << width
    return value - (1 << width) if value >> (width - 1) else value


# -- sort rules -----------------------------------------------------------


def _arity(app: App, *counts: int) -> None:
    if len(app.args) not in counts:
        raise SortError(f"{app.op} expects {' or '.join(map(str, counts))} arguments, got {len(app.args)}")


def _all(app: App, sort_type: type, at_least: int = 1) -> list[Sort]:
    if len(app.args) < at_least:
        raise SortError(f"{app.op} expects at least {at_least} arguments")
    sorts = [a.sort for a in app.args]
    for s in sorts:
        if not isinstance(s, sort_type):
            raise SortError(f"{app.op} applied to argument of sort {s}")
    return sorts


def _int_nary(app):
    _all(app, IntSort, 2 if app.op != "-" else 1)
    if app.op == "-":
        _arity(app, 1, 2)
    return INT


def _int_mul(app):
    _arity(app, 2)
    _all(app, IntSort)
    if not any(isinstance(a, Const) for a in app.args):
        raise SortError("multiplication is only supported by a constant")
    return INT


def _int_cmp(app):
    _arity(app, 2)
    _all(app, IntSort)
    return BOOL


def _eq(app):
    if len(app.args) < 2:
        raise SortError(f"{app.op} expects at least 2 arguments")
    first = app.args[0].sort
    for a in app.args[1:]:
        if a.sort != first:
            raise SortError(f"{app.op} over mismatched sorts {first} and {a.sort}")
    return BOOL


def _bool_nary(app):
    _all(app, BoolSort, 0)
    return BOOL


def _not(app):
    _arity(app, 1)
    _all(app, BoolSort)
    return BOOL


def _implies(app):
    _arity(app, 2)
    _all(app, BoolSort)
    return BOOL


def _ite(app):
    _arity(app, 3)
    if app.args[0].sort != BOOL:
        raise SortError(f"ite guard has sort {app.args[0].sort}")
    if app.args[1].sort != app.args[2].sort:
        raise SortError(f"ite branches differ: {app.args[1].sort} vs {app.args[2].sort}")
    return app.args[1].sort


def _bv_binary(app):
    _arity(app, 2)
    a, b = _all(app, BitVecSort)
    if a != b:
        raise SortError(f"{app.op} over widths {a} and {b}")
    return a


def _bv_not(app):
    _arity(app, 1)
    return _all(app, BitVecSort)[0]


def _bv_cmp(app):
    _bv_binary(app)
    return BOOL


def _select(app):
    _arity(app, 2)
    if app.args[0].sort != ARRAY or app.args[1].sort != INT:
        raise SortError("select expects (Array Int Int) and Int")
    return INT


def _store(app):
    _arity(app, 3)
    if app.args[0].sort != ARRAY or app.args[1].sort != INT or app.args[2].sort != INT:
        raise SortError("store expects (Array Int Int), Int and Int")
    return ARRAY


def _state_of(app) -> StateSort:
    s = app.args[0].sort
    if not isinstance(s, StateSort):
        raise SortError(f"{app.op} applied to non-state sort {s}")
    if app.index is None or app.index not in s.names:
        raise SortError(f"state {s} has no variable {app.index!r}")
    return s


def _get_field(app):
    _arity(app, 1)
    return _state_of(app).field_sort(app.index)


def _set_field(app):
    _arity(app, 2)
    s = _state_of(app)
    if app.args[1].sort != s.field_sort(app.index):
        raise SortError(f"set-field {app.index}: value sort {app.args[1].sort} != {s.field_sort(app.index)}")
    return s


def _insert(app):
    _arity(app, 2)
    if app.args[0].sort != INT or app.args[1].sort != LIST:
        raise SortError("insert expects Int and (List Int)")
    return LIST


def _nil(app):
    _arity(app, 0)
    return LIST


def _record(app):
    s = app.declared
    if not isinstance(s, StateSort):
        raise SortError("state construction needs a declared state sort")
    if len(app.args) != len(s.fields):
        raise SortError(f"state {s} has {len(s.fields)} fields, got {len(app.args)} values")
    for a, (n, fs) in zip(app.args, s.fields):
        if a.sort != fs:
            raise SortError(f"field {n}: value sort {a.sort} != {fs}")
    return s


def _ctor(app):
    if not isinstance(app.declared, TermSort) or app.index is None:
        raise SortError("constructor application needs a name and a term sort")
    for a in app.args:
        if not isinstance(a.sort, TermSort):
            raise SortError(f"constructor {app.index} applied to {a.sort}")
    return app.declared


_SIGNATURES: dict[str, Callable[[App], Sort]] = {
    "+": _int_nary,
    "-": _int_nary,
    "*": _int_mul,
    "<": _int_cmp,
    "<=": _int_cmp,
    ">": _int_cmp,
    ">=": _int_cmp,
    "=": _eq,
    "distinct": _eq,
    "and": _bool_nary,
    "or": _bool_nary,
    "not": _not,
    "=>": _implies,
    "ite": _ite,
    "bvand": _bv_binary,
    "bvor": _bv_binary,
    "bvxor": _bv_binary,
    "bvadd": _bv_binary,
    "bvsub": _bv_binary,
    "bvnot": _bv_not,
    "bvslt": _bv_cmp,
    "bvsle": _bv_cmp,
    "bvult": _bv_cmp,
    "bvule": _bv_cmp,
    "select": _select,
    "store": _store,
    "get-field": _get_field,
    "set-field": _set_field,
    "insert": _insert,
    "nil": _nil,
    "ctor": _ctor,
    "state": _record,
}

OPERATORS = frozenset(_SIGNATURES)


# -- construction helpers -------------------------------------------------


def app(op: str, *args: Formula, index: str | None = None) -> App:
    return App(op, tuple(args), index)


def conj(parts: Iterable[Formula]) -> Formula:
    flat: list[Formula] = []
    for p in parts:
        if isinstance(p, App) and p.op == "and":
            flat.extend(p.args)
        elif p == TRUE:
            continue
        else:
            flat.append(p)
    if not flat:
        return TRUE
    if len(flat) == 1:
        return flat[0]
    return App("and", tuple(flat))


def disj(parts: Iterable[Formula]) -> Formula:
    parts = [p for p in parts if p != FALSE]
    if not parts:
        return FALSE
    if len(parts) == 1:
        return parts[0]
    return App("or", tuple(parts))


def eq(a: Formula, b: Formula) -> App:
    return App("=", (a, b))


def ite(c: Formula, a: Formula, b: Formula) -> App:
    return App("ite", (c, a, b))


def neg(a: Formula) -> App:
    return App("not", (a,))


def get_field(name: str, s: Formula) -> App:
    return App("get-field", (s,), name)


def set_field(name: str, s: Formula, v: Formula) -> App:
    return App("set-field", (s, v), name)


def record(s: StateSort, values: Iterable[Formula]) -> App:
    return App("state", tuple(values), None, s)


def int_const(v: int) -> Const:
    return Const(v, INT)


def bv_const(v: int, width: int) -> Const:
    return Const(v, BitVecSort(width))


TRUE = Const(True, BOOL)
FALSE = Const(False, BOOL)


def conjuncts(f: Formula) -> list[Formula]:
    if isinstance(f, App) and f.op == "and":
        out: list[Formula] = []
        for a in f.args:
            out.extend(conjuncts(a))
        return out
    if f == TRUE:
        return []
    return [f]


def substitute(f: Formula, mapping: Mapping[str, Formula]) -> Formula:
    """Replace free variables by formulas of the same sort."""
    if isinstance(f, Var):
        rep = mapping.get(f.name)
        if rep is None:
            return f
        if rep.sort != f.sort:
            raise SortError(f"substituting {f.name}: {rep.sort} for {f.sort}")
        return rep
    if isinstance(f, App):
        if not (f.free_vars() & mapping.keys()):
            return f
        return App(f.op, tuple(substitute(a, mapping) for a in f.args), f.index, f.declared)
    return f


def rename(f: Formula, names: Mapping[str, str]) -> Formula:
    if isinstance(f, Var):
        return Var(names.get(f.name, f.name), f.sort)
    if isinstance(f, App):
        if not (f.free_vars() & names.keys()):
            return f
        return App(f.op, tuple(rename(a, names) for a in f.args), f.index, f.declared)
    return f


# -- evaluation -----------------------------------------------------------


def evaluate(f: Formula, env: Mapping[str, Any]) -> Any:
    """Evaluate a closed-under-``env`` formula to a runtime value."""
    if isinstance(f, Const):
        return f.value
    if isinstance(f, Var):
        try:
            return env[f.name]
        except KeyError:
            raise EvaluationError(f"unbound variable {f.name}") from None
    op = f.op
    if op == "ite":
        c = evaluate(f.args[0], env)
        return evaluate(f.args[1] if c else f.args[2], env)
    if op == "and":
        return all(evaluate(a, env) for a in f.args)
    if op == "or":
        return any(evaluate(a, env) for a in f.args)
    if op == "=>":
        return (not evaluate(f.args[0], env)) or evaluate(f.args[1], env)
    vals = [evaluate(a, env) for a in f.args]
    return _APPLY[op](f, vals)


def _bv_width(f: App) -> int:
    return f.args[0].sort.width


def _select_value(_f, v):
    arr, i = v
    if not 0 <= i < len(arr):
        raise ArrayBoundsError(f"select index {i} outside array of length {len(arr)}")
    return arr[i]


def _store_value(_f, v):
    arr, i, x = v
    if not 0 <= i < len(arr):
        raise ArrayBoundsError(f"store index {i} outside array of length {len(arr)}")
    return arr[:i] + (x,) + arr[i + 1:]


def _set_field_value(f, v):
    s, x = v
    i = f.args[0].sort.index(f.index)
    return s[:i] + (x,) + s[i + 1:]


def _mask(f, x):
    return x % (1 << f.sort.width)


_APPLY: dict[str, Callable[[App, list], Any]] = {
    "+": lambda f, v: sum(v),
    "-": lambda f, v: -v[0] if len(v) == 1 else v[0] - v[1],
    "*": lambda f, v: v[0] * v[1],
    "<": lambda f, v: v[0] < v[1],
    "<=": lambda f, v: v[0] <= v[1],
    ">": lambda f, v: v[0] > v[1],
    ">=": lambda f, v: v[0] >= v[1],
    "=": lambda f, v: all(x == v[0] for x in v[1:]),
    "distinct": lambda f, v: len(set(v)) == len(v),
    "not": lambda f, v: not v[0],
    "bvand": lambda f, v: v[0] & v[1],
    "bvor": lambda f, v: v[0] | v[1],
    "bvxor": lambda f, v: v[0] ^ v[1],
    "bvadd": lambda f, v: _mask(f, v[0] + v[1]),
    "bvsub": lambda f, v: _mask(f, v[0] - v[1]),
    "bvnot": lambda f, v: _mask(f, ~v[0]),
    "bvslt": lambda f, v: to_signed(v[0], _bv_width(f)) < to_signed(v[1], _bv_width(f)),
    "bvsle": lambda f, v: to_signed(v[0], _bv_width(f)) <= to_signed(v[1], _bv_width(f)),
    "bvult": lambda f, v: v[0] < v[1],
    "bvule": lambda f, v: v[0] <= v[1],
    "select": _select_value,
    "store": _store_value,
    "get-field": lambda f, v: v[0][f.args[0].sort.index(f.index)],
    "set-field": _set_field_value,
    "insert": lambda f, v: (v[0],) + v[1],
    "nil": lambda f, v: (),
    "state": lambda f, v: tuple(v),
}
