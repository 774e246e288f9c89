"""Regular expressions with matrix semantics.

A string of length at most ``maxLen`` is the state ``(len, s0 .. s{maxLen-1})``
with characters encoded as integers.  A regex denotes the upper-triangular
Boolean matrix ``X`` where ``X[i,j]`` says whether it matches ``s[i:j]``; the
matrix is a record with one Bool field ``m_i_j`` per ``i <= j <= maxLen``.
Entries reaching past ``len`` are false.
"""

from __future__ import annotations

from ..core import formula as F
from ..core.formula import FALSE, TRUE, Const, Formula, Var, app, conj, disj, eq, get_field
from ..core.grammar import Grammar, Production
from ..core.rules import RelationSig, SemanticRule, sem_relation
from ..core.sorts import BOOL, INT, StateSort
from .impv import RuleBuilder
from .problem import Example

REGEX_NT = "R"


def string_state(max_len: int) -> StateSort:
    return StateSort((("len", INT),) + tuple((f"s{i}", INT) for i in range(max_len)))


def cell(i: int, j: int) -> str:
    return f"m_{i}_{j}"


def matrix_sort(max_len: int) -> StateSort:
    return StateSort(tuple((cell(i, j), BOOL) for i in range(max_len + 1) for j in range(i, max_len + 1)))


def regex_grammar(alphabet: int, nonterminal: str = REGEX_NT, max_len: int = 1) -> Grammar:
    """char c (one per letter), eps, empty, alt, cat, star, numbered from 1."""
    ops = [(f"char.{c}", ()) for c in range(alphabet)]
    ops += [("eps", ()), ("empty", ()), ("alt", (nonterminal,) * 2), ("cat", (nonterminal,) * 2),
            ("star", (nonterminal,))]
    prods = tuple(Production(k + 1, nonterminal, op, rhs) for k, (op, rhs) in enumerate(ops))
    return Grammar({nonterminal: matrix_sort(max_len)}, nonterminal, prods)


class _Matrix:
    """Symbolic matrix: a function from (i, j) to a Bool formula."""

    def __init__(self, n: int, entry):
        self.n = n
        self.entry = entry

    def record(self, sort: StateSort) -> Formula:
        return F.record(sort, [self.entry(i, j) for i in range(self.n + 1) for j in range(i, self.n + 1)])


def _fits(j: int, length: Formula) -> Formula:
    return app("<=", Const(j, INT), length)


def _from(var: Formula, n: int) -> _Matrix:
    return _Matrix(n, lambda i, j: get_field(cell(i, j), var))


def _product(a: _Matrix, b: _Matrix) -> _Matrix:
    return _Matrix(a.n, lambda i, j: disj([app("and", a.entry(i, k), b.entry(k, j)) for k in range(i, j + 1)]))


def _regex_rules(p: Production, sigs, max_len: int) -> list[SemanticRule]:
    st = string_state(max_len)
    ms = matrix_sort(max_len)
    b = RuleBuilder(p, sigs)
    G = b.var("G", st)
    length = get_field("len", G)
    n = max_len
    op = p.op
    cons: list[Formula] = []
    if op.startswith("char."):
        c = int(op.split(".", 1)[1])
        res = _Matrix(n, lambda i, j: app("and", _fits(j, length), eq(get_field(f"s{i}", G), Const(c, INT)))
                      if j == i + 1 else FALSE)
        name = "Char"
    elif op == "eps":
        res = _Matrix(n, lambda i, j: _fits(j, length) if i == j else FALSE)
        name = "Eps"
    elif op == "empty":
        res = _Matrix(n, lambda i, j: FALSE)
        name = "Empty"
    elif op in ("alt", "cat"):
        (x,) = b.call(0, [G], ["X"])
        (y,) = b.call(1, [G], ["Y"])
        if op == "alt":
            res = _Matrix(n, lambda i, j: app("or", get_field(cell(i, j), x), get_field(cell(i, j), y)))
            name = "Alt"
        else:
            res = _product(_from(x, n), _from(y, n))
            name = "Cat"
    elif op == "star":
        (x,) = b.call(0, [G], ["X"])
        # Y0 = I, Yk = X.Y(k-1) + Y(k-1); Y(maxLen) is the reflexive-transitive closure.
        prev = b.var("Y0", ms)
        cons.append(eq(prev, _Matrix(n, lambda i, j: _fits(j, length) if i == j else FALSE).record(ms)))
        for k in range(1, n + 1):
            cur = b.var(f"Y{k}", ms)
            step = _product(_from(x, n), _from(prev, n))
            pv = prev
            cons.append(eq(cur, _Matrix(n, lambda i, j, step=step, pv=pv: app(
                "or", step.entry(i, j), get_field(cell(i, j), pv))).record(ms)))
            prev = cur
        res = _from(prev, n)
        name = "Star"
    else:
        raise ValueError(f"unknown regex operator {op!r}")
    out = b.var("M", ms)
    cons.append(eq(out, res.record(ms)))
    return [b.rule(name, [G], [out], conj(cons))]


def build_regex_semantics(alphabet: int, max_len: int, nonterminal: str = REGEX_NT):
    """Grammar, rules and signatures of the regex language with matrix semantics."""
    if alphabet < 1 or max_len < 1:
        raise ValueError("alphabet size and maximum length must be positive")
    g = regex_grammar(alphabet, nonterminal, max_len)
    sigs = {sem_relation(nonterminal): RelationSig(nonterminal, (string_state(max_len),), (matrix_sort(max_len),))}
    rules = {p.id: tuple(_regex_rules(p, sigs, max_len)) for p in g.productions}
    return g, rules, sigs


def regex_rules_for(g: Grammar, max_len: int):
    """Rules for an arbitrary grammar over the regex operators (one nonterminal per sort)."""
    st = string_state(max_len)
    sigs = {sem_relation(nt): RelationSig(nt, (st,), (s,)) for nt, s in g.nonterminals.items()}
    return {p.id: tuple(_regex_rules(p, sigs, max_len)) for p in g.productions}, sigs


def string_example(s, accept: bool, max_len: int) -> Example:
    """Example saying whether the whole string ``s`` is matched."""
    s = tuple(s)
    if len(s) > max_len:
        raise ValueError(f"string {s} longer than the maximum length {max_len}")
    padded = s + (0,) * (max_len - len(s))
    return Example(input=(len(s),) + padded, expected={cell(0, len(s)): accept})


def example_string(ex: Example) -> tuple[int, ...]:
    return tuple(ex.input[1:1 + ex.input[0]])


__all__ = [
    "build_regex_semantics", "regex_grammar", "regex_rules_for", "string_state", "matrix_sort", "cell",
    "string_example", "example_string", "REGEX_NT",
]
