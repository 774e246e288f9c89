"""Built-in semantics for subgrammars of the imperative grammar G_impv.

Operators are matched by name together with the sorts of the production, so
``ite`` covers statement, bit-vector and integer conditionals, ``+`` covers
integer and bit-vector addition and ``<`` is integer or signed bit-vector
comparison.  Assignment and variable reads name their variable after a dot:
``assign.x``, ``var.x``, ``store.arr``, ``select.arr``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

from ..core import formula as F
from ..core.formula import (
    FALSE,
    TRUE,
    Const,
    Formula,
    Var,
    app,
    conj,
    disj,
    eq,
    get_field,
    ite,
    neg,
    set_field,
)
from ..core.grammar import Grammar, Production, Term
from ..core.rules import RelationApp, RelationSig, SemanticRule, sem_relation
from ..core.sorts import (
    ARRAY,
    BOOL,
    INT,
    ArraySort,
    BitVecSort,
    BoolSort,
    IntSort,
    Sort,
    StateSort,
    TermSort,
)
from .problem import ProblemError


class NotImpvSubgrammar(ProblemError):
    def __init__(self, pid: int, reason: str = ""):
        super().__init__(f"production {pid} is outside the imperative grammar" + (f": {reason}" if reason else ""))
        self.pid = pid


class NotVerifiableSpec(ProblemError):
    pass


BOUND_FIELD = "__bound"

# -- operator classification ----------------------------------------------


@dataclass(frozen=True)
class ImpvOp:
    """A production recognised as a G_impv operator."""

    shape: str  # while seq site eite assign store select var const true false add and or not band bor bnot lt
    kind: str  # stmt | bv | int | bool
    var: str | None = None
    value: int | None = None


def _kind(sort: Sort, st: StateSort | None) -> str | None:
    if st is not None and sort == st:
        return "stmt"
    if isinstance(sort, BitVecSort):
        return "bv"
    if isinstance(sort, IntSort):
        return "int"
    if isinstance(sort, BoolSort):
        return "bool"
    return None


def infer_state(g: Grammar) -> StateSort | None:
    states = {s for s in g.nonterminals.values() if isinstance(s, StateSort)}
    if len(states) > 1:
        raise NotImpvSubgrammar(0, "statement nonterminals disagree on the state sort")
    return next(iter(states), None)


def classify(g: Grammar, p: Production, st: StateSort | None) -> ImpvOp:
    """Match ``p`` against the operators of G_impv or raise NotImpvSubgrammar."""
    sorts = g.nonterminals
    lhs = sorts[p.lhs]
    k = _kind(lhs, st)
    kids = [sorts[a] for a in p.rhs]
    kinds = [_kind(s, st) for s in kids]
    op = p.op
    bad = NotImpvSubgrammar(p.id, f"operator {op!r} with sorts {lhs} <- {', '.join(map(str, kids)) or '()'}")
    if k is None or None in kinds:
        raise bad

    def same_sort(*xs: Sort) -> bool:
        return all(x == lhs for x in xs)

    base, _, name = op.partition(".")
    if name:
        if st is None or name not in st.names:
            raise bad
        fsort = st.field_sort(name)
        if base == "assign" and k == "stmt" and len(kids) == 1 and kids[0] == fsort and not isinstance(fsort, ArraySort):
            return ImpvOp("assign", k, name)
        if base == "var" and not kids and lhs == fsort and k in ("bv", "int", "bool"):
            return ImpvOp("var", k, name)
        if base == "store" and k == "stmt" and kinds == ["int", "int"] and isinstance(fsort, ArraySort):
            return ImpvOp("store", k, name)
        if base == "select" and k == "int" and kinds == ["int"] and isinstance(fsort, ArraySort):
            return ImpvOp("select", k, name)
        raise bad
    if op == "while" and k == "stmt" and kinds == ["bool", "stmt"] and kids[1] == lhs:
        return ImpvOp("while", k)
    if op == "seq" and k == "stmt" and kinds == ["stmt", "stmt"]:
        return ImpvOp("seq", k)
    if op == "ite" and len(kids) == 3 and kinds[0] == "bool" and same_sort(kids[1], kids[2]):
        return ImpvOp("site" if k == "stmt" else "eite", k)
    if op in ("0", "1", "bv0", "bv1") and not kids and (k == "bv" or (k == "int" and not op.startswith("bv"))):
        return ImpvOp("const", k, value=int(op[-1]))
    if op in ("true", "false") and not kids and k == "bool":
        return ImpvOp(op, k)
    if (op == "+" and k in ("int", "bv") or op == "bvadd" and k == "bv") and len(kids) == 2 and same_sort(*kids):
        return ImpvOp("add", k)
    if op in ("bvand", "bvor") and k == "bv" and len(kids) == 2 and same_sort(*kids):
        return ImpvOp("band" if op == "bvand" else "bor", k)
    if op == "bvnot" and k == "bv" and len(kids) == 1 and same_sort(*kids):
        return ImpvOp("bnot", k)
    if op == "<" and k == "bool" and len(kids) == 2 and kids[0] == kids[1] and kinds[0] in ("int", "bv"):
        return ImpvOp("lt", k)
    if op == "and" and k == "bool" and kinds == ["bool", "bool"]:
        return ImpvOp("and", k)
    if op == "not" and k == "bool" and kinds == ["bool"]:
        return ImpvOp("not", k)
    raise bad


def subgrammar_of_impv(g: Grammar, state_sort: StateSort | None = None) -> bool:
    try:
        st = state_sort or infer_state(g)
        for p in g.productions:
            classify(g, p, st)
    except NotImpvSubgrammar:
        return False
    return True


def impv_ops(g: Grammar, state_sort: StateSort | None = None) -> dict[int, ImpvOp]:
    st = state_sort or infer_state(g)
    return {p.id: classify(g, p, st) for p in g.productions}


# -- rule building helpers ------------------------------------------------


class RuleBuilder:
    """Collects variables and premises for one rule of one production."""

    def __init__(self, p: Production, sigs: dict[str, RelationSig]):
        self.p = p
        self.sigs = sigs
        self.vars: list[tuple[str, Sort]] = [("t", TermSort(p.lhs))]
        self.vars += [(f"t{k + 1}", TermSort(a)) for k, a in enumerate(p.rhs)]
        self.body: list[RelationApp] = []
        self._names = {n for n, _ in self.vars}

    def var(self, name: str, sort: Sort) -> Var:
        if name not in self._names:
            self.vars.append((name, sort))
            self._names.add(name)
        return Var(name, sort)

    def call(self, k: int | None, inputs: list[Formula], out_names: list[str]) -> list[Var]:
        """Premise on child ``k`` (0-based) or on the head term when ``k`` is None."""
        nt = self.p.lhs if k is None else self.p.rhs[k]
        sig = self.sigs[sem_relation(nt)]
        outs = [self.var(n, s) for n, s in zip(out_names, sig.outputs)]
        term = "t" if k is None else f"t{k + 1}"
        self.body.append(RelationApp(sem_relation(nt), tuple(inputs), term, tuple(outs)))
        return outs

    def rule(self, name: str, inputs: list[Formula], outputs: list[Formula], constraint: Formula = TRUE) -> SemanticRule:
        head = RelationApp(sem_relation(self.p.lhs), tuple(inputs), "t", tuple(outputs))
        return SemanticRule(self.p.id, tuple(self.vars), tuple(self.body), constraint, head, name)


def _out(b: RuleBuilder, sort: Sort, expr: Formula, name: str = "r") -> tuple[Var, Formula]:
    v = b.var(name, sort)
    return v, eq(v, expr)


def _zero(sort: Sort) -> Formula:
    if isinstance(sort, BitVecSort):
        return Const(0, sort)
    if isinstance(sort, BoolSort):
        return FALSE
    return Const(0, INT)


def _const(value: int, sort: Sort) -> Const:
    return Const(value, sort)


def _lt(a: Formula, b: Formula) -> Formula:
    return app("bvslt", a, b) if isinstance(a.sort, BitVecSort) else app("<", a, b)


def _add(a: Formula, b: Formula) -> Formula:
    return app("bvadd", a, b) if isinstance(a.sort, BitVecSort) else app("+", a, b)


def _pure(op: ImpvOp, args: list[Formula], g_state: Formula, sort: Sort) -> Formula:
    """Value of an expression operator given its children's values."""
    s = op.shape
    if s == "var":
        return get_field(op.var, g_state)
    if s == "const":
        return _const(op.value, sort)
    if s == "true":
        return TRUE
    if s == "false":
        return FALSE
    if s == "add":
        return _add(*args)
    if s == "band":
        return app("bvand", *args)
    if s == "bor":
        return app("bvor", *args)
    if s == "bnot":
        return app("bvnot", *args)
    if s == "lt":
        return _lt(*args)
    if s == "and":
        return conj(args) if len(args) != 2 else app("and", *args)
    if s == "not":
        return neg(args[0])
    if s == "select":
        return app("select", get_field(op.var, g_state), args[0])
    raise AssertionError(s)


def _signatures(g: Grammar, st: StateSort, value_sort: Callable[[Sort], Sort], n_inputs: list[Sort],
                n: int = 1) -> dict[str, RelationSig]:
    return {sem_relation(nt): RelationSig(nt, tuple(n_inputs), tuple([value_sort(s)] * n))
            for nt, s in g.nonterminals.items()}


# -- standard (and bounded) semantics --------------------------------------


def impv_signatures(g: Grammar, st: StateSort) -> dict[str, RelationSig]:
    return {sem_relation(nt): RelationSig(nt, (st,), (s,)) for nt, s in g.nonterminals.items()}


def _standard_rules(p: Production, op: ImpvOp, st: StateSort, sigs, bounded: bool = False) -> list[SemanticRule]:
    out_sort = sigs[sem_relation(p.lhs)].outputs[0]

    def fresh() -> tuple[RuleBuilder, Var]:
        b = RuleBuilder(p, sigs)
        return b, b.var("G", st)

    s = op.shape
    if s == "assign":
        b, G = fresh()
        (v,) = b.call(0, [G], ["v"])
        r, c = _out(b, st, set_field(op.var, G, v))
        return [b.rule("Assign", [G], [r], c)]
    if s == "store":
        b, G = fresh()
        (i,) = b.call(0, [G], ["i"])
        (v,) = b.call(1, [G], ["v"])
        new = app("store", get_field(op.var, G), i, v)
        r, c = _out(b, st, set_field(op.var, G, new))
        return [b.rule("Store", [G], [r], c)]
    if s == "seq":
        b, G = fresh()
        (g1,) = b.call(0, [G], ["G1"])
        (g2,) = b.call(1, [g1], ["G2"])
        return [b.rule("Seq", [G], [g2])]
    if s in ("site", "eite"):
        rules = []
        for branch, truth in ((1, TRUE), (2, FALSE)):
            b, G = fresh()
            (vb,) = b.call(0, [G], ["vb"])
            (v,) = b.call(branch, [G], ["v"])
            label = ("SITE" if s == "site" else "EITE") + ("-true" if branch == 1 else "-false")
            rules.append(b.rule(label, [G], [v], eq(vb, truth)))
        return rules
    if s == "while":
        b, G = fresh()
        (vb,) = b.call(0, [G], ["vb"])
        guard = [eq(vb, TRUE)]
        if bounded:
            k = get_field(BOUND_FIELD, G)
            guard.append(app(">", k, Const(0, INT)))
            (g1,) = b.call(1, [G], ["G1"])
            g1_dec = b.var("G1d", st)
            guard.append(eq(g1_dec, set_field(BOUND_FIELD, g1, app("-", k, Const(1, INT)))))
            (g2,) = b.call(None, [g1_dec], ["G2"])
            r, c = _out(b, st, set_field(BOUND_FIELD, g2, k))
            wtrue = b.rule("WTrue", [G], [r], conj([*guard, c]))
        else:
            (g1,) = b.call(1, [G], ["G1"])
            (g2,) = b.call(None, [g1], ["G2"])
            wtrue = b.rule("WTrue", [G], [g2], conj(guard))
        b, G = fresh()
        (vb,) = b.call(0, [G], ["vb"])
        guard = [eq(vb, FALSE)]
        if bounded:
            guard.append(app(">", get_field(BOUND_FIELD, G), Const(0, INT)))
        wfalse = b.rule("WFalse", [G], [G], conj(guard))
        return [wtrue, wfalse]
    # expression operators: one rule, children evaluated in order
    b, G = fresh()
    args = []
    for k in range(p.arity):
        args.extend(b.call(k, [G], [f"v{k + 1}"]))
    v, c = _out(b, out_sort, _pure(op, args, G, out_sort), "v")
    name = {"var": "Var", "const": "Const", "true": "True", "false": "False", "add": "Add", "band": "BvAnd",
            "bor": "BvOr", "bnot": "BvNot", "lt": "Lt", "and": "And", "not": "Not", "select": "Select"}[s]
    return [b.rule(name, [G], [v], c)]


def build_impv_semantics(g: Grammar, state_sort: StateSort | None = None):
    """Standard big-step rules for a G_impv subgrammar.

    Returns ``(rules, signatures)`` where ``rules`` maps production ids to
    their semantic rules.
    """
    st = state_sort or infer_state(g)
    if st is None:
        raise NotImpvSubgrammar(0, "no statement nonterminal fixes the state; pass the state sort")
    ops = impv_ops(g, st)
    sigs = impv_signatures(g, st)
    rules = {p.id: tuple(_standard_rules(p, ops[p.id], st, sigs)) for p in g.productions}
    return rules, sigs


# -- vectorized semantics ---------------------------------------------------


def live_var(k: int) -> str:
    return f"l{k}"


def vector_signatures(g: Grammar, st: StateSort, n: int) -> dict[str, RelationSig]:
    ins = []
    for _ in range(n):
        ins += [BOOL, st]
    return {sem_relation(nt): RelationSig(nt, tuple(ins), tuple([s] * n)) for nt, s in g.nonterminals.items()}


def _vector_rules(p: Production, op: ImpvOp, st: StateSort, sigs, n: int) -> list[SemanticRule]:
    out_sort = sigs[sem_relation(p.lhs)].outputs[0]
    b = RuleBuilder(p, sigs)
    L = [b.var(f"l{k}", BOOL) for k in range(1, n + 1)]
    G = [b.var(f"G{k}", st) for k in range(1, n + 1)]
    head_in: list[Formula] = [x for pair in zip(L, G) for x in pair]

    def inputs(lives, states):
        return [x for pair in zip(lives, states) for x in pair]

    def names(prefix):
        return [f"{prefix}{k}" for k in range(1, n + 1)]

    s = op.shape
    cons: list[Formula] = []
    if s == "assign":
        v = b.call(0, head_in, names("v"))
        outs = [b.var(f"r{k}", st) for k in range(1, n + 1)]
        cons = [eq(outs[k], ite(L[k], set_field(op.var, G[k], v[k]), G[k])) for k in range(n)]
        return [b.rule("Assign_E", head_in, outs, conj(cons))]
    if s == "store":
        i = b.call(0, head_in, names("i"))
        v = b.call(1, head_in, names("v"))
        outs = [b.var(f"r{k}", st) for k in range(1, n + 1)]
        cons = [eq(outs[k], ite(L[k], set_field(op.var, G[k], app("store", get_field(op.var, G[k]), i[k], v[k])), G[k]))
                for k in range(n)]
        return [b.rule("Store_E", head_in, outs, conj(cons))]
    if s == "seq":
        g1 = b.call(0, head_in, names("H"))
        g2 = b.call(1, inputs(L, g1), names("K"))
        return [b.rule("Seq_E", head_in, g2)]
    if s in ("site", "eite"):
        vb = b.call(0, head_in, names("vb"))
        not_vb = [b.var(f"nl{k}", BOOL) for k in range(1, n + 1)]
        cons = [eq(not_vb[k], app("and", L[k], neg(vb[k]))) for k in range(n)]
        v1 = b.call(1, inputs(vb, G), names("u"))
        v2 = b.call(2, inputs(not_vb, G), names("w"))
        outs = [b.var(f"r{k}", out_sort) for k in range(1, n + 1)]
        cons += [eq(outs[k], ite(vb[k], v1[k], v2[k])) for k in range(n)]
        return [b.rule("SITE_E" if s == "site" else "EITE_E", head_in, outs, conj(cons))]
    if s == "while":
        vb = b.call(0, head_in, names("vb"))
        g1 = b.call(1, inputs(vb, G), names("H"))
        g2 = b.call(None, inputs(vb, g1), names("K"))
        outs = [b.var(f"r{k}", st) for k in range(1, n + 1)]
        cons = [disj(vb) if n > 1 else vb[0]]
        cons += [eq(outs[k], ite(vb[k], g2[k], G[k])) for k in range(n)]
        wtrue = b.rule("WTrue_E", head_in, outs, conj(cons))
        b = RuleBuilder(p, sigs)
        L2 = [b.var(f"l{k}", BOOL) for k in range(1, n + 1)]
        G2 = [b.var(f"G{k}", st) for k in range(1, n + 1)]
        head_in2: list[Formula] = [x for pair in zip(L2, G2) for x in pair]
        vb = b.call(0, head_in2, names("vb"))
        wfalse = b.rule("WFalse_E", head_in2, G2, conj([neg(x) for x in vb]))
        return [wtrue, wfalse]
    children = [b.call(k, head_in, [f"v{k + 1}_{j}" for j in range(1, n + 1)]) for k in range(p.arity)]
    outs = [b.var(f"r{k}", out_sort) for k in range(1, n + 1)]
    for k in range(n):
        val = _pure(op, [c[k] for c in children], G[k], out_sort)
        if s == "select":
            val = ite(L[k], val, _zero(out_sort))
        elif op.kind == "bool" and s not in ("and", "false"):
            val = app("and", L[k], val) if val != TRUE else L[k]
        cons.append(eq(outs[k], val))
    return [b.rule(f"{s}_E", head_in, outs, conj(cons))]


def build_vectorized_semantics(g: Grammar, n: int, state_sort: StateSort | None = None):
    st = state_sort or infer_state(g)
    if st is None:
        raise NotImpvSubgrammar(0, "no statement nonterminal fixes the state")
    ops = impv_ops(g, st)
    sigs = vector_signatures(g, st, n)
    rules = {p.id: tuple(_vector_rules(p, ops[p.id], st, sigs, n)) for p in g.productions}
    return rules, sigs


# -- abstract B_i semantics -------------------------------------------------

TOP = 2


def abstract_state(st: StateSort) -> StateSort:
    for name, s in st.fields:
        if not isinstance(s, (BitVecSort, BoolSort)):
            raise ProblemError(f"abstract bit semantics needs bit-vector state; {name} has sort {s}")
    return StateSort(tuple((name, INT) for name, _ in st.fields))


def _abs_binary(a: Formula, b: Formula, both_one: bool) -> Formula:
    """Eq. 1 style transformer: Top if either side is Top, else the exact bit."""
    two = Const(TOP, INT)
    one, zero = Const(1, INT), Const(0, INT)
    if both_one:
        exact = ite(app("and", eq(a, one), eq(b, one)), one, zero)
    else:
        exact = ite(app("or", eq(a, one), eq(b, one)), one, zero)
    return ite(app("or", eq(a, two), eq(b, two)), two, exact)


def _abs_not(a: Formula) -> Formula:
    two = Const(TOP, INT)
    return ite(eq(a, two), two, app("-", Const(1, INT), a))


def abs_join(a: Formula, b: Formula) -> Formula:
    return ite(eq(a, b), a, Const(TOP, INT))


def _abs_join_state(st: StateSort, a: Formula, b: Formula) -> Formula:
    return F.record(st, [abs_join(get_field(n, a), get_field(n, b)) for n in st.names])


def _abstract_rules(p: Production, op: ImpvOp, st: StateSort, sigs, bit: int, mode: str) -> list[SemanticRule]:
    two = Const(TOP, INT)

    def fresh():
        b = RuleBuilder(p, sigs)
        return b, b.var("G", st)

    s = op.shape
    if s == "assign":
        b, G = fresh()
        (v,) = b.call(0, [G], ["v"])
        r, c = _out(b, st, set_field(op.var, G, v))
        return [b.rule("Assign#", [G], [r], c)]
    if s == "seq":
        b, G = fresh()
        (g1,) = b.call(0, [G], ["G1"])
        (g2,) = b.call(1, [g1], ["G2"])
        return [b.rule("Seq#", [G], [g2])]
    if s in ("site", "eite"):
        out_sort = sigs[sem_relation(p.lhs)].outputs[0]
        rules = []
        for branch, truth in ((1, 1), (2, 0)):
            b, G = fresh()
            (vb,) = b.call(0, [G], ["vb"])
            (v,) = b.call(branch, [G], ["v"])
            rules.append(b.rule(f"ITE#-{truth}", [G], [v], eq(vb, Const(truth, INT))))
        b, G = fresh()
        (vb,) = b.call(0, [G], ["vb"])
        (v1,) = b.call(1, [G], ["v1"])
        (v2,) = b.call(2, [G], ["v2"])
        joined = _abs_join_state(st, v1, v2) if s == "site" else abs_join(v1, v2)
        r, c = _out(b, out_sort, joined)
        rules.append(b.rule("ITE#-top", [G], [r], conj([eq(vb, two), c])))
        return rules
    if s == "while":
        b, G = fresh()
        (vb,) = b.call(0, [G], ["vb"])
        wfalse = b.rule("WFalse#", [G], [G], neg(eq(vb, Const(1, INT))))
        b, G = fresh()
        (vb,) = b.call(0, [G], ["vb"])
        (g1,) = b.call(1, [G], ["G1"])
        (g2,) = b.call(None, [g1], ["G2"])
        if mode == "havoc":
            result = F.record(st, [two] * len(st.fields))
            name = "WTrue_Havoc#"
        else:
            result = _abs_join_state(st, G, g2)
            name = "WTrue_Join#"
        r, c = _out(b, st, result)
        wtrue = b.rule(name, [G], [r], conj([neg(eq(vb, Const(0, INT))), c]))
        return [wtrue, wfalse]
    if s in ("store", "select"):
        raise NotImpvSubgrammar(p.id, "arrays have no bit abstraction")
    b, G = fresh()
    args = []
    for k in range(p.arity):
        args.extend(b.call(k, [G], [f"v{k + 1}"]))
    if s == "var":
        val = get_field(op.var, G)
    elif s == "const":
        val = Const(1 if (op.value >> (bit - 1)) & 1 else 0, INT)
    elif s in ("true", "false"):
        val = Const(1 if s == "true" else 0, INT)
    elif s in ("band", "and"):
        val = _abs_binary(args[0], args[1], True)
    elif s == "bor":
        val = _abs_binary(args[0], args[1], False)
    elif s in ("bnot", "not"):
        val = _abs_not(args[0])
    elif s in ("add", "lt"):
        val = two
    else:
        raise AssertionError(s)
    v, c = _out(b, INT, val, "v")
    return [b.rule(f"{s}#", [G], [v], c)]


def build_abstract_semantics(g: Grammar, bit: int, mode: str, state_sort: StateSort | None = None):
    if bit < 1:
        raise ValueError("bits are numbered from 1")
    if mode not in ("havoc", "join"):
        raise ValueError(f"unknown while mode {mode!r}")
    st = state_sort or infer_state(g)
    if st is None:
        raise NotImpvSubgrammar(0, "no statement nonterminal fixes the state")
    ops = impv_ops(g, st)
    for p in g.productions:
        if ops[p.id].kind == "int":
            raise NotImpvSubgrammar(p.id, "integer expressions have no bit abstraction")
        if isinstance(g.nonterminals[p.lhs], BitVecSort) and g.nonterminals[p.lhs].width < bit:
            raise ValueError(f"bit {bit} exceeds the width of {p.lhs}")
    ast = abstract_state(st)
    sigs = {sem_relation(nt): RelationSig(nt, (ast,), (ast if s == st else INT,)) for nt, s in g.nonterminals.items()}
    rules = {p.id: tuple(_abstract_rules(p, ops[p.id], ast, sigs, bit, mode)) for p in g.productions}
    return rules, sigs


def bounded_state(st: StateSort) -> StateSort:
    if BOUND_FIELD in st.names:
        raise ProblemError("state already carries a loop bound")
    return StateSort(st.fields + ((BOUND_FIELD, INT),))


def build_bounded_semantics(g: Grammar, state_sort: StateSort | None = None):
    """Standard rules over a state extended with a shared loop counter."""
    st = state_sort or infer_state(g)
    if st is None:
        raise NotImpvSubgrammar(0, "no statement nonterminal fixes the state")
    ops = impv_ops(g, st)
    bst = bounded_state(st)
    sigs = {sem_relation(nt): RelationSig(nt, (bst,), (bst if s == st else s,)) for nt, s in g.nonterminals.items()}
    rules = {p.id: tuple(_standard_rules(p, ops[p.id], bst, sigs, bounded=True)) for p in g.productions}
    return rules, sigs


# -- expressions as formulas (for verification) ------------------------------


def term_to_formula(g: Grammar, t: Term, state_sort: StateSort) -> Formula:
    """Translate a pure expression term to a formula over the state variables."""
    ops = impv_ops(g, state_sort)
    env = F.record(state_sort, [Var(n, s) for n, s in state_sort.fields])

    def go(u: Term) -> Formula:
        op = ops[u.prod]
        lhs_sort = g.nonterminals[g.by_id[u.prod].lhs]
        if op.kind == "stmt":
            raise NotVerifiableSpec("statement terms have no closed-form formula")
        args = [go(c) for c in u.children]
        if op.shape == "eite":
            return ite(*args)
        if op.shape == "var":
            return Var(op.var, state_sort.field_sort(op.var))
        if op.shape == "select":
            return app("select", Var(op.var, ARRAY), args[0])
        return _pure(op, args, env, lhs_sort)

    return go(t)


__all__ = [
    "NotImpvSubgrammar", "NotVerifiableSpec", "ImpvOp", "classify", "subgrammar_of_impv", "impv_ops",
    "build_impv_semantics", "build_vectorized_semantics", "build_abstract_semantics",
    "build_bounded_semantics", "term_to_formula", "infer_state", "abstract_state", "bounded_state",
    "BOUND_FIELD", "TOP", "RuleBuilder", "impv_signatures", "vector_signatures",
]
