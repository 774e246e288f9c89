"""Problems to CHC programs: syntax, semantics, fusion and the query."""

from __future__ import annotations

from typing import Sequence

from ..core import formula as F
from ..core.formula import TRUE, App, Const, Formula, Var, app, conj, disj, eq, get_field
from ..core.grammar import Grammar, Production
from ..core.rules import RelationApp, SemanticRule, sem_relation
from ..core.sorts import ARRAY, BOOL, INT, LIST, StateSort, TermSort
from ..frontend.impv import TOP
from ..frontend.problem import Problem, ProblemError, require_examples
from .chc import QUERY, Atom, ChcProgram, Clause, Representation, make_clause


def syn_relation(nt: str) -> str:
    return f"syn_{nt}"


def fused_relation(nt: str) -> str:
    return f"fsyn_{nt}"


def ctor_name(pid: int) -> str:
    return f"p{pid}"


def _rep(rep) -> Representation:
    return rep if isinstance(rep, Representation) else Representation(rep)


# -- listing positions ------------------------------------------------------


class _Positions:
    """Listing positions for one production under a list or array representation.

    Child ``i`` (1-based) spans ``pos[i-1]`` up to ``pos[i]``; ``full`` is the
    whole listing of the term and ``pos[k]`` is the remainder after it.
    """

    def __init__(self, rep: Representation, p: Production):
        self.rep = rep
        self.array = Var("__A", ARRAY)
        k = p.arity
        if rep is Representation.LIST:
            rest = Var("__rest", LIST)
            first = Var("__p1", LIST) if k else rest
            self.full = app("insert", Const(p.id, INT), first)
            self.guard: Formula = TRUE
        else:
            start = Var("__p0", INT)
            first = app("+", start, Const(1, INT))
            rest = Var("__rest", INT) if k else first
            self.full = start
            self.guard = eq(app("select", self.array, start), Const(p.id, INT))
        self.pos = [first] + [Var(f"__p{i + 1}", first.sort) for i in range(1, k)] + ([rest] if k else [])
        self.rest = rest

    @property
    def extra(self) -> list[Formula]:
        return [self.array] if self.rep is Representation.ARRAY else []


# -- syntax -----------------------------------------------------------------


def encode_syntax(g: Grammar, rep=Representation.TREE) -> list[Clause]:
    """One clause per production: the term (or listing) belongs to its nonterminal."""
    rep = _rep(rep)
    out = []
    for p in g.productions:
        if rep is Representation.TREE:
            kids = [Var(f"t{i + 1}", TermSort(a)) for i, a in enumerate(p.rhs)]
            head = Atom(syn_relation(p.lhs), (_ctor(p, kids),))
            body = [Atom(syn_relation(a), (v,)) for a, v in zip(p.rhs, kids)]
            out.append(make_clause(body, TRUE, head, f"syn {p.id}"))
            continue
        ps = _Positions(rep, p)
        head = Atom(syn_relation(p.lhs), (*ps.extra, ps.rest, ps.full))
        body = [_syn_child(ps, p, i) for i in reversed(range(p.arity))]
        out.append(make_clause(body, ps.guard, head, f"syn {p.id}"))
    return out


def _ctor(p: Production, kids: Sequence[Formula]) -> App:
    return App("ctor", tuple(kids), ctor_name(p.id), TermSort(p.lhs))


def _syn_child(ps: _Positions, p: Production, i: int) -> Atom:
    """Syntax premise for child ``i`` (0-based), threaded right to left."""
    return Atom(syn_relation(p.rhs[i]), (*ps.extra, ps.pos[i + 1], ps.pos[i]))


def tree_datatypes(g: Grammar):
    return tuple((nt, tuple((ctor_name(p.id), p.rhs) for p in g.by_lhs.get(nt, ())))
                 for nt in g.nonterminals)


# -- semantics --------------------------------------------------------------


def _check_no_terms(rule: SemanticRule) -> None:
    terms = {rule.head.term, *rule.children}
    for f in [rule.constraint, *rule.head.inputs, *rule.head.outputs,
              *(x for a in rule.body for x in (*a.inputs, *a.outputs))]:
        if f.free_vars() & terms:
            raise ProblemError(f"rule {rule.name!r} of production {rule.production} uses a term variable as data")


def _child_index(rule: SemanticRule, term: str) -> int | None:
    """0-based child position of a premise term variable; None for the head term."""
    if term == rule.head.term:
        return None
    return rule.children.index(term)


def encode_rule(rule: SemanticRule, g: Grammar, rep=Representation.TREE) -> Clause:
    rep = _rep(rep)
    p = g.by_id[rule.production]
    _check_no_terms(rule)
    if rep is Representation.TREE:
        kids = {name: Var(name, TermSort(a)) for name, a in zip(rule.children, p.rhs)}
        whole = _ctor(p, [kids[n] for n in rule.children])

        def term(name: str) -> Formula:
            return whole if name == rule.head.term else kids[name]

        body = [Atom(a.relation, (*a.inputs, term(a.term), *a.outputs)) for a in rule.body]
        head = Atom(rule.head.relation, (*rule.head.inputs, whole, *rule.head.outputs))
        return make_clause(body, rule.constraint, head, f"{rule.name or 'rule'} {p.id}")
    ps = _Positions(rep, p)
    body = []
    used = set()
    for a in rule.body:
        i = _child_index(rule, a.term)
        if i is None:
            span = (ps.full, ps.rest)
        else:
            used.add(i)
            span = (ps.pos[i], ps.pos[i + 1])
        body.append(Atom(a.relation, (*a.inputs, *ps.extra, span[0], *a.outputs, span[1])))
    body += [_syn_child(ps, p, i) for i in range(p.arity) if i not in used]
    head = Atom(rule.head.relation, (*rule.head.inputs, *ps.extra, ps.full, *rule.head.outputs, ps.rest))
    return make_clause(body, conj([ps.guard, rule.constraint]), head, f"{rule.name or 'rule'} {p.id}")


def encode_semantics(p: Problem, rep=Representation.TREE) -> list[Clause]:
    """Every semantic rule as a clause over the chosen term representation."""
    return [encode_rule(r, p.grammar, rep) for rules in p.semantics.values() for r in rules]


def fuse(p: Problem, rep=Representation.ARRAY) -> list[Clause]:
    """Fused clauses: building the listing and computing its semantics together.

    The first premise on a child becomes a fused premise that constructs the
    child's listing; later premises on the same child, and premises on the
    term itself (loops), use the plain semantic relation on the listing that
    already exists.  Unused plain relations are pruned from the final program.
    """
    rep = _rep(rep)
    if rep is Representation.TREE:
        raise ValueError("fusion needs a listing representation (list or array)")
    g = p.grammar
    out = []
    for rules in p.semantics.values():
        for rule in rules:
            prod = g.by_id[rule.production]
            _check_no_terms(rule)
            ps = _Positions(rep, prod)
            body = []
            used: set[int] = set()
            for a in rule.body:
                i = _child_index(rule, a.term)
                if i is None:
                    body.append(Atom(a.relation, (*a.inputs, *ps.extra, ps.full, *a.outputs, ps.rest)))
                elif i not in used:
                    used.add(i)
                    nt = prod.rhs[i]
                    body.append(Atom(fused_relation(nt), (*a.inputs, *ps.extra, ps.pos[i + 1], *a.outputs, ps.pos[i])))
                else:
                    body.append(Atom(a.relation, (*a.inputs, *ps.extra, ps.pos[i], *a.outputs, ps.pos[i + 1])))
            body += [_syn_child(ps, prod, i) for i in reversed(range(prod.arity)) if i not in used]
            head = Atom(fused_relation(prod.lhs), (*rule.head.inputs, *ps.extra, ps.rest, *rule.head.outputs, ps.full))
            out.append(make_clause(body, conj([ps.guard, rule.constraint]), head,
                                   f"fused {rule.name or 'rule'} {prod.id}"))
    return out


# -- query --------------------------------------------------------------------


def _example_io(p: Problem):
    """Per-example (input formulas, output variables, output constraint) triples."""
    examples = require_examples(p)
    base = p.original
    v = p.variant
    in_sort = base.input_sort
    out_sort = base.output_sort

    def psi(ex, o: Formula) -> Formula:
        if v.kind == "abstract":
            return _abstract_psi(ex, o, out_sort, v.bit)
        if v.kind == "bounded" and isinstance(o.sort, StateSort) and o.sort != out_sort:
            o = F.record(out_sort, [get_field(n, o) for n in out_sort.names])
        return ex.constraint(o, in_sort)

    sig_out = p.sig(p.start).outputs
    if v.kind == "vectorized":
        if v.n != len(examples):
            raise ProblemError(f"vectorized over {v.n} entries but the problem has {len(examples)} examples")
        ins: list[Formula] = []
        outs = []
        for k, ex in enumerate(examples):
            ins += [TRUE, Const(F.coerce_value(ex.input, in_sort), in_sort)]
            outs.append(Var(f"o{k + 1}", sig_out[k]))
        return [(ins, outs, conj([psi(ex, o) for ex, o in zip(examples, outs)]))]
    result = []
    in_sig = p.sig(p.start).inputs[0]
    for k, ex in enumerate(examples):
        value = F.coerce_value(ex.input, in_sort)
        if v.kind == "abstract":
            from ..interp.api import alpha

            value = alpha(value, v.bit)
        elif v.kind == "bounded":
            value = value + (v.bound,)
        o = Var(f"o{k + 1}", sig_out[0])
        result.append(([Const(value, in_sig)], [o], psi(ex, o)))
    return result


def _abstract_psi(ex, o: Formula, out_sort, bit: int) -> Formula:
    from ..interp.api import alpha

    if ex.formula is not None:
        raise ProblemError("abstract semantics needs concrete output examples")
    two = Const(TOP, INT)

    def allows(x: Formula, value) -> Formula:
        return disj([eq(x, two), eq(x, Const(alpha(value, bit), INT))])

    fields = ex.expected_fields
    if fields is not None:
        return conj([allows(get_field(n, o), val) for n, val in fields.items()])
    if isinstance(out_sort, StateSort):
        return conj([allows(get_field(n, o), val) for n, val in zip(out_sort.names, ex.expected)])
    return allows(o, ex.expected)


def _prefix_constraint(rep: Representation, listing: Formula, prefix: Sequence[int], array: Formula | None):
    if not prefix:
        return TRUE
    if rep is Representation.LIST:
        tail: Formula = Var("__suffix", LIST)
        for d in reversed(prefix):
            tail = app("insert", Const(d, INT), tail)
        return eq(listing, tail)
    return conj([eq(app("select", array, Const(j, INT)), Const(d, INT)) for j, d in enumerate(prefix)])


def query_clause(p: Problem, rep=Representation.TREE, fused: bool = False,
                 prefix: Sequence[int] = ()) -> Clause:
    """Realizable <= syntax /\\ per-example semantics /\\ output constraints."""
    rep = _rep(rep)
    start = p.start
    body: list[Atom] = []
    cons: list[Formula] = []
    ios = _example_io(p)
    if rep is Representation.TREE:
        if fused:
            raise ValueError("fusion needs a listing representation (list or array)")
        if prefix:
            raise ValueError("listing prefixes need a list or array representation")
        t = Var("t", TermSort(start))
        body.append(Atom(syn_relation(start), (t,)))
        for ins, outs, psi in ios:
            body.append(Atom(sem_relation(start), (*ins, t, *outs)))
            cons.append(psi)
        return make_clause(body, conj(cons), Atom(QUERY), "query")
    if rep is Representation.LIST:
        extra: list[Formula] = []
        listing, end = Var("__L", LIST), app("nil")
        array = None
    else:
        array = Var("__A", ARRAY)
        extra = [array]
        listing, end = Const(0, INT), Var("__end", INT)
    whole = Var("__L", LIST) if rep is Representation.LIST else None
    if fused:
        for ins, outs, psi in ios:
            body.append(Atom(fused_relation(start), (*ins, *extra, end, *outs, listing)))
            cons.append(psi)
    else:
        body.append(Atom(syn_relation(start), (*extra, end, listing)))
        for ins, outs, psi in ios:
            body.append(Atom(sem_relation(start), (*ins, *extra, listing, *outs, end)))
            cons.append(psi)
    cons.append(_prefix_constraint(rep, whole if whole is not None else listing, prefix, array))
    return make_clause(body, conj(cons), Atom(QUERY), "query")


def _prune(clauses: list[Clause]) -> list[Clause]:
    needed = {QUERY}
    changed = True
    while changed:
        changed = False
        for cl in clauses:
            if cl.head is not None and cl.head.relation in needed:
                for a in cl.body:
                    if a.relation not in needed:
                        needed.add(a.relation)
                        changed = True
    return [cl for cl in clauses if cl.head is None or cl.head.relation in needed]


def _relations(clauses: list[Clause]):
    seen: dict[str, tuple] = {}
    for cl in clauses:
        for a in ((cl.head,) if cl.head else ()) + cl.body:
            sorts = tuple(x.sort for x in a.args)
            prev = seen.setdefault(a.relation, sorts)
            if prev != sorts:
                raise F.SortError(f"relation {a.relation} used at {prev} and {sorts}")
    return tuple(seen.items())


def build_query(p: Problem, rep=Representation.TREE, fused: bool = False, prefix: Sequence[int] = ()) -> ChcProgram:
    """The complete program: syntax, semantics (or fused) clauses, query and goal."""
    rep = _rep(rep)
    query = query_clause(p, rep, fused, prefix)
    clauses: list[Clause] = []
    if fused:
        clauses += fuse(p, rep)
    clauses += encode_syntax(p.grammar, rep)
    clauses += encode_semantics(p, rep)
    clauses.append(query)
    clauses.append(Clause((), (Atom(QUERY),), TRUE, None, "goal"))
    clauses = _prune(clauses)
    # Order relations as: query, then everything else by first use.
    ordered = sorted(clauses, key=lambda c: 0 if c.head is not None and c.head.relation == QUERY else 1)
    rels = _relations(ordered[1:] + ordered[:1])
    v = p.variant
    meta: list[tuple[str, object]] = [("semantics", v.kind), ("fused", fused)]
    if v.kind == "vectorized":
        meta.append(("examples", v.n))
    if v.kind == "abstract":
        meta += [("bit", v.bit), ("while", v.mode)]
    if v.kind == "bounded":
        meta.append(("bound", v.bound))
    if prefix:
        meta.append(("prefix", " ".join(map(str, prefix))))
    dts = tree_datatypes(p.grammar) if rep is Representation.TREE else ()
    return ChcProgram(rels, tuple(clauses), rep, tuple(meta), dts)


def encode(p: Problem, rep=Representation.ARRAY, vectorized: bool = False, fused: bool = False,
           prefix: Sequence[int] = ()) -> ChcProgram:
    """Convenience wrapper: optionally vectorize a standard problem, then build the program."""
    if vectorized and p.variant.kind == "standard":
        from .transforms import vectorize

        p = vectorize(p)
    return build_query(p, rep, fused, prefix)


__all__ = [
    "encode_syntax", "encode_semantics", "encode_rule", "fuse", "query_clause", "build_query", "encode",
    "syn_relation", "fused_relation", "ctor_name", "tree_datatypes",
]
