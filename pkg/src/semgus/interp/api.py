"""Public interpreters: standard, vectorized, abstract, bounded and regex."""

from __future__ import annotations

from typing import Any, Mapping, Sequence

from ..core import formula as F
from ..core.formula import EvaluationError, Var
from ..core.grammar import Grammar, Term
from ..core.sorts import ArraySort, BitVecSort, BoolSort, ListSort, StateSort
from ..frontend.impv import BOUND_FIELD, TOP, ImpvOp, NotImpvSubgrammar, impv_ops, infer_state
from ..frontend.problem import OUTPUT_VAR, Problem, SpecNotExamples, require_examples
from ..frontend.regex import cell, example_string, matrix_sort
from .compile import compile_formula
from .engine import DEFAULT_FUEL, DIVERGED, UNDEFINED, Fuel, Interpreter, OutOfFuel, StuckNoRule, _Outcome

BOTTOM = _Outcome("BOTTOM")
_NO_STATE = _Outcome("NO_STATE")  # abstract bottom: no terminating run
ABS_FALSE, ABS_TRUE = 0, 1

# -- standard ---------------------------------------------------------------


def _coerce_input(p: Problem, value) -> tuple:
    st = p.input_sort
    if isinstance(value, Mapping):
        value = tuple(value[n] for n in st.names)
    return F.coerce_value(tuple(value), st)


def _single(outs: tuple):
    return outs[0] if len(outs) == 1 else outs


def interpreter(p: Problem) -> Interpreter:
    return Interpreter(p.semantics, p.signatures)


def eval(p: Problem, t: Term, inputs, fuel: int = DEFAULT_FUEL):  # noqa: A001 - mirrors the documented name
    """Output of ``t`` on ``inputs`` under the problem's own rules, or DIVERGED."""
    out = interpreter(p).run(t, (_coerce_input(p, inputs),), fuel)
    return out if out is DIVERGED else _single(out)


# -- vectorized -------------------------------------------------------------


def _default_state(st: StateSort) -> tuple:
    def zero(s):
        if isinstance(s, BoolSort):
            return False
        return () if isinstance(s, (ArraySort, ListSort)) else 0

    return tuple(zero(s) for _, s in st.fields)


def eval_vectorized(p: Problem, t: Term, entries: Sequence, fuel: int = DEFAULT_FUEL):
    """Run ``t`` on a vector of valuations at once; BOTTOM entries stay BOTTOM."""
    from ..encode.transforms import vectorize

    base = p.original
    vp = vectorize(base, len(entries))
    st = base.input_sort
    ins: list[Any] = []
    for e in entries:
        live = e is not BOTTOM and e is not None
        ins += [live, _coerce_input(base, e) if live else _default_state(st)]
    out = Interpreter(vp.semantics, vp.signatures).run(t, ins, fuel)
    if out is DIVERGED:
        return DIVERGED
    return [o if (e is not BOTTOM and e is not None) else BOTTOM for e, o in zip(entries, out)]


# -- abstract B_i -------------------------------------------------------------


def abs_join(a: int, b: int) -> int:
    return a if a == b else TOP


def alpha(value, bit: int, sort=None) -> int | tuple:
    """Abstraction of a concrete value (or state tuple) to bit ``bit``, 1-based."""
    if isinstance(value, tuple):
        return tuple(alpha(v, bit) for v in value)
    if isinstance(value, bool):
        return int(value)
    return (value >> (bit - 1)) & 1


def in_gamma(value, abstract, bit: int) -> bool:
    """Whether a concrete value is described by an abstract one."""
    if isinstance(value, tuple):
        return all(in_gamma(v, a, bit) for v, a in zip(value, abstract))
    return abstract == TOP or abstract == alpha(value, bit)


def _abs_and(a, b):
    return TOP if TOP in (a, b) else int(a == 1 and b == 1)


def _abs_or(a, b):
    return TOP if TOP in (a, b) else int(a == 1 or b == 1)


def _abs_not(a):
    return TOP if a == TOP else 1 - a


class _Abstract:
    def __init__(self, g: Grammar, st: StateSort, bit: int, mode: str, fuel: Fuel):
        self.g = g
        self.ops = impv_ops(g, st)
        for pid, op in self.ops.items():
            if op.shape in ("store", "select") or op.kind == "int":
                raise NotImpvSubgrammar(pid, "no bit abstraction for arrays or integers")
        self.names = st.names
        self.index = {n: i for i, n in enumerate(st.names)}
        self.bit = bit
        self.mode = mode
        self.fuel = fuel

    def join_state(self, a, b):
        if a is _NO_STATE:
            return b
        if b is _NO_STATE:
            return a
        return tuple(abs_join(x, y) for x, y in zip(a, b))

    def run(self, t: Term, G):
        """Abstract output of ``t``; _NO_STATE when no run of ``t`` from ``G`` terminates."""
        self.fuel.tick()
        if G is _NO_STATE:
            return _NO_STATE
        op: ImpvOp = self.ops[t.prod]
        s = op.shape
        kids = t.children
        if s == "assign":
            v = self.run(kids[0], G)
            i = self.index[op.var]
            return G[:i] + (v,) + G[i + 1:]
        if s == "seq":
            return self.run(kids[1], self.run(kids[0], G))
        if s in ("site", "eite"):
            vb = self.run(kids[0], G)
            if vb == 1:
                return self.run(kids[1], G)
            if vb == 0:
                return self.run(kids[2], G)
            a, b = self.run(kids[1], G), self.run(kids[2], G)
            return self.join_state(a, b) if s == "site" else abs_join(a, b)
        if s == "while":
            return self.loop(t, G)
        if s == "var":
            return G[self.index[op.var]]
        if s == "const":
            return (op.value >> (self.bit - 1)) & 1
        if s in ("true", "false"):
            return int(s == "true")
        args = [self.run(k, G) for k in kids]
        if s in ("band", "and"):
            return _abs_and(*args)
        if s == "bor":
            return _abs_or(*args)
        if s in ("bnot", "not"):
            return _abs_not(args[0])
        if s in ("add", "lt"):
            return TOP
        raise AssertionError(s)

    def loop(self, t: Term, G):
        cond, body = t.children
        seen = set()
        while True:
            self.fuel.tick()
            if G is _NO_STATE:
                return G
            vb = self.run(cond, G)
            if vb == 0:
                return G
            if vb == 1:
                # Finitely many abstract states: a repeat under a definitely-true guard never exits.
                if G in seen:
                    return _NO_STATE
                seen.add(G)
                G = self.run(body, G)
                continue
            if self.mode == "havoc":
                return (TOP,) * len(G)
            # Least H with G <= H and body(H) <= H; every loop-head state lies in it.
            H = G
            while True:
                self.fuel.tick()
                nxt = self.join_state(H, self.run(body, H))
                if nxt == H:
                    return H
                H = nxt


def eval_abstract(p: Problem, t: Term, inputs, bit: int, mode: str = "join", fuel: int = DEFAULT_FUEL):
    """B_bit evaluation of ``t`` on an abstract state (0, 1 or TOP per variable).

    DIVERGED means no run terminates (a definitely-true guard cycles) or fuel ran out.
    """
    if bit < 1:
        raise ValueError("bits are numbered from 1")
    if mode not in ("havoc", "join"):
        raise ValueError(f"unknown while mode {mode!r}")
    base = p.original
    st = infer_state(base.grammar) or base.input_sort
    for name, s in st.fields:
        if not isinstance(s, (BitVecSort, BoolSort)):
            raise NotImpvSubgrammar(0, f"field {name} has no bit abstraction")
    if isinstance(inputs, Mapping):
        inputs = tuple(inputs[n] for n in st.names)
    inputs = tuple(inputs)
    if len(inputs) != len(st.fields) or any(v not in (0, 1, TOP) for v in inputs):
        raise ValueError(f"abstract state must give 0, 1 or {TOP} for each of {st.names}")
    interp = _Abstract(base.grammar, st, bit, mode, Fuel(fuel))
    try:
        out = interp.run(t, inputs)
    except (OutOfFuel, RecursionError):
        return DIVERGED
    return DIVERGED if out is _NO_STATE else out


# -- bounded ----------------------------------------------------------------


def eval_bounded(p: Problem, t: Term, inputs, bound: int, fuel: int = DEFAULT_FUEL):
    """Evaluation where loops share a counter starting at ``bound``; UNDEFINED if it runs out."""
    from ..encode.transforms import make_bounded

    base = p.original
    bp = make_bounded(base, bound)
    start = _coerce_input(base, inputs) + (bound,)
    try:
        out = Interpreter(bp.semantics, bp.signatures).run(t, (start,), fuel)
    except StuckNoRule:
        return UNDEFINED
    if out is DIVERGED:
        return DIVERGED
    (v,) = out
    st = bp.input_sort
    if isinstance(v, tuple) and len(v) == len(st.fields) and st.names[-1] == BOUND_FIELD:
        v = v[:-1]
    return v


# -- regex ------------------------------------------------------------------


def _regex_ops(g: Grammar) -> dict[int, tuple[str, int]]:
    ops = {}
    for prod in g.productions:
        if prod.op.startswith("char."):
            ops[prod.id] = ("char", int(prod.op.split(".", 1)[1]))
        elif prod.op in ("eps", "empty", "alt", "cat", "star"):
            ops[prod.id] = (prod.op, 0)
        else:
            raise ValueError(f"production {prod.id} ({prod.op}) is not a regex operator")
    return ops


def _mul(a: list[int], b: list[int]) -> list[int]:
    out = []
    for row in a:
        acc = 0
        while row:
            low = row & -row
            acc |= b[low.bit_length() - 1]
            row ^= low
        out.append(acc)
    return out


def _rows(ops, t: Term, s: Sequence[int]) -> list[int]:
    n = len(s)
    kind, c = ops[t.prod]
    if kind == "char":
        return [(1 << (i + 1)) if i < n and s[i] == c else 0 for i in range(n + 1)]
    if kind == "eps":
        return [1 << i for i in range(n + 1)]
    if kind == "empty":
        return [0] * (n + 1)
    if kind == "alt":
        a, b = (_rows(ops, k, s) for k in t.children)
        return [x | y for x, y in zip(a, b)]
    if kind == "cat":
        a, b = (_rows(ops, k, s) for k in t.children)
        return _mul(a, b)
    x = _rows(ops, t.children[0], s)
    y = [1 << i for i in range(n + 1)]
    while True:
        nxt = [u | v for u, v in zip(y, _mul(x, y))]
        if nxt == y:
            return y
        y = nxt


def regex_matrix(g: Grammar, r: Term, s: Sequence[int]) -> tuple[tuple[bool, ...], ...]:
    """Matrix X with X[i][j] true iff ``r`` matches ``s[i:j]`` (lower triangle false)."""
    rows = _rows(_regex_ops(g), r, tuple(s))
    n = len(s)
    return tuple(tuple(bool(row >> j & 1) for j in range(n + 1)) for row in rows)


def regex_accepts(g: Grammar, r: Term, s: Sequence[int]) -> bool:
    return bool(_rows(_regex_ops(g), r, tuple(s))[0] >> len(s) & 1)


# -- example checking -------------------------------------------------------


class ExampleChecker:
    """Checks candidate terms against a problem's examples; built once per problem."""

    def __init__(self, p: Problem, fuel: int = DEFAULT_FUEL):
        base = p.original
        self.problem = base
        self.fuel = fuel
        examples = require_examples(base)
        self.regex = base.builtin is not None and base.builtin[0] == "regex"
        out_sort = base.output_sort
        in_sort = base.input_sort
        self.checks = []
        o = Var(OUTPUT_VAR, out_sort)
        for ex in examples:
            fn = compile_formula(ex.constraint(o, in_sort))
            self.checks.append((ex, fn))
        if self.regex:
            self.ops = _regex_ops(base.grammar)
            self.max_len = base.builtin[2] if len(base.builtin) > 2 else None
            self.out_sort = out_sort
        else:
            self.interp = interpreter(base)
            self.inputs = [(_coerce_input(base, ex.input),) for ex in examples]

    def _regex_output(self, t: Term, ex) -> tuple:
        s = example_string(ex)
        rows = _rows(self.ops, t, s)
        vals = []
        for name in self.out_sort.names:
            _, i, j = name.split("_")
            i, j = int(i), int(j)
            vals.append(i < len(rows) and bool(rows[i] >> j & 1))
        return tuple(vals)

    def check(self, t: Term) -> bool:
        for k, (ex, fn) in enumerate(self.checks):
            if self.regex:
                out = self._regex_output(t, ex)
            else:
                try:
                    res = self.interp.run(t, self.inputs[k], self.fuel)
                except (StuckNoRule, EvaluationError):
                    return False
                if res is DIVERGED:
                    return False
                out = res[0]
            try:
                if not fn({OUTPUT_VAR: out}):
                    return False
            except EvaluationError:
                return False
        return True


def check_examples(p: Problem, t: Term, fuel: int = DEFAULT_FUEL) -> bool:
    """True iff ``t`` meets every example; divergence counts as failure."""
    return ExampleChecker(p, fuel).check(t)


__all__ = [
    "eval", "eval_vectorized", "eval_abstract", "eval_bounded", "regex_matrix", "regex_accepts",
    "check_examples", "ExampleChecker", "alpha", "in_gamma", "abs_join", "interpreter",
    "BOTTOM", "DIVERGED", "UNDEFINED", "TOP", "ABS_FALSE", "ABS_TRUE", "SpecNotExamples", "cell", "matrix_sort",
]
