"""Reader and printer for the S-expression problem format (``:format 1``)."""

from __future__ import annotations

from typing import Any, Mapping

from ..core import formula as F
from ..core.formula import Const, Formula, SortError, Var
from ..core.grammar import Grammar, Production
from ..core.printer import formula_to_sexpr, int_literal, value_to_sexpr
from ..core.rules import RelationApp, RelationSig, RuleError, SemanticRule, sem_relation
from ..core.sexpr import (
    BitVecLiteral,
    Keyword,
    Numeral,
    SExprSyntaxError,
    SList,
    String,
    Symbol,
    location,
    parse_sexprs,
    write_symbol,
)
from ..core.sorts import (
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
from .impv import build_impv_semantics
from .problem import (
    OUTPUT_VAR,
    Example,
    Problem,
    ProblemError,
    Specification,
    UnknownProduction,
    validate_problem,
)
from .regex import cell, matrix_sort, regex_grammar, regex_rules_for, string_example, string_state

FORMAT_VERSION = 1


class FormatError(ProblemError):
    def __init__(self, message: str, node: Any = None):
        line, col = location(node) if node is not None else (0, 0)
        where = f"{line}:{col}: " if line else ""
        super().__init__(where + message)
        self.line = line
        self.col = col


class FormatSyntaxError(FormatError):
    pass


class FormatSortError(FormatError):
    pass


# -- helpers -----------------------------------------------------------------


def _is_list(x) -> bool:
    return isinstance(x, list)


def _keywords(items, node) -> dict[str, Any]:
    out = {}
    i = 0
    while i < len(items):
        k = items[i]
        if not isinstance(k, Keyword):
            raise FormatSyntaxError(f"expected a :keyword, got {k!r}", k if hasattr(k, "line") else node)
        if i + 1 >= len(items):
            raise FormatSyntaxError(f"keyword :{k} has no value", k)
        out[str(k)] = items[i + 1]
        i += 2
    return out


def parse_sort(x, aliases: Mapping[str, Sort]) -> Sort:
    if isinstance(x, Symbol):
        if x == "Int":
            return INT
        if x == "Bool":
            return BOOL
        if x in aliases:
            return aliases[x]
        raise FormatSortError(f"unknown sort {x}", x)
    if _is_list(x) and x:
        head = x[0]
        if head == "BitVec" and len(x) == 2 and isinstance(x[1], Numeral):
            return BitVecSort(int(x[1]))
        if head == "_" and len(x) == 3 and x[1] == "BitVec" and isinstance(x[2], Numeral):
            return BitVecSort(int(x[2]))
        if head == "Array" and len(x) == 3 and x[1] == "Int" and x[2] == "Int":
            return ARRAY
        if head == "List" and len(x) == 2 and x[1] == "Int":
            return LIST
        if head == "Term" and len(x) == 2 and isinstance(x[1], Symbol):
            return TermSort(str(x[1]))
        if head == "State":
            fields = []
            for f in x[1:]:
                if not (_is_list(f) and len(f) == 2 and isinstance(f[0], Symbol)):
                    raise FormatSyntaxError("state fields are (name sort) pairs", f if hasattr(f, "line") else x)
                fields.append((str(f[0]), parse_sort(f[1], aliases)))
            try:
                return StateSort(tuple(fields))
            except ValueError as e:
                raise FormatSortError(str(e), x) from None
    raise FormatSortError(f"malformed sort {x!r}", x if hasattr(x, "line") else None)


def sort_to_sexpr(s: Sort) -> str:
    return str(s)


def _int_value(x) -> int | None:
    if isinstance(x, Numeral):
        return int(x)
    if _is_list(x) and len(x) == 2 and x[0] == "-" and isinstance(x[1], Numeral):
        return -int(x[1])
    return None


def parse_value(x, sort: Sort):
    """Read a literal value of ``sort``; raises FormatSortError if it is not one."""
    if isinstance(sort, BoolSort):
        if x in ("true", "false") and isinstance(x, Symbol):
            return x == "true"
    elif isinstance(sort, IntSort):
        v = _int_value(x)
        if v is not None:
            return v
    elif isinstance(sort, BitVecSort):
        if isinstance(x, BitVecLiteral):
            if x.width != sort.width:
                raise FormatSortError(f"bit-vector literal of width {x.width}, expected {sort.width}")
            return x.value
        if _is_list(x) and len(x) == 3 and x[0] == "_" and isinstance(x[1], Symbol) and x[1].startswith("bv"):
            if int(x[2]) != sort.width:
                raise FormatSortError(f"bit-vector literal of width {x[2]}, expected {sort.width}", x)
            return int(x[1][2:]) % (1 << sort.width)
        v = _int_value(x)
        if v is not None:
            return v % (1 << sort.width)
    elif isinstance(sort, (ArraySort, ListSort)):
        if _is_list(x):
            items = x[1:] if x and x[0] in ("array", "list") else x
            vals = [_int_value(i) for i in items]
            if all(v is not None for v in vals):
                return tuple(vals)
    elif isinstance(sort, StateSort):
        if _is_list(x):
            fields = _pairs(x)
            if fields is not None and set(fields) == set(sort.names):
                return tuple(parse_value(fields[n], s) for n, s in sort.fields)
    raise FormatSortError(f"not a literal of sort {sort}: {_show(x)}", x if hasattr(x, "line") else None)


def _pairs(x) -> dict[str, Any] | None:
    out = {}
    for item in x:
        if not (_is_list(item) and len(item) == 2 and isinstance(item[0], Symbol)):
            return None
        out[str(item[0])] = item[1]
    return out


def _show(x) -> str:
    if _is_list(x):
        return "(" + " ".join(_show(i) for i in x) + ")"
    return str(x)


def parse_formula(x, env: Mapping[str, Sort]) -> Formula:
    try:
        return _formula(x, env)
    except SortError as e:
        raise FormatSortError(str(e), x if hasattr(x, "line") else None) from None


def _formula(x, env: Mapping[str, Sort]) -> Formula:
    if isinstance(x, Numeral):
        return Const(int(x), INT)
    if isinstance(x, BitVecLiteral):
        return Const(x.value, BitVecSort(x.width))
    if isinstance(x, Symbol):
        if x == "true":
            return F.TRUE
        if x == "false":
            return F.FALSE
        if x in env:
            return Var(str(x), env[x])
        raise FormatSortError(f"undeclared variable {x}", x)
    if not _is_list(x) or not x:
        raise FormatSyntaxError(f"malformed formula {_show(x)}", x if hasattr(x, "line") else None)
    head = x[0]
    iv = _int_value(x)
    if iv is not None:
        return Const(iv, INT)
    if head == "_" and len(x) == 3 and isinstance(x[1], Symbol) and x[1].startswith("bv"):
        return Const(int(x[1][2:]), BitVecSort(int(x[2])))
    if head == "as" and len(x) == 3 and x[1] == "nil":
        return F.App("nil", ())
    if head == "array":
        vals = [_int_value(v) for v in x[1:]]
        if any(v is None for v in vals):
            raise FormatSyntaxError("array literals hold integers", x)
        return Const(tuple(vals), ARRAY)
    if head in ("get-field", "set-field"):
        if len(x) < 3 or not isinstance(x[1], Symbol):
            raise FormatSyntaxError(f"{head} needs a field name", x)
        args = tuple(_formula(a, env) for a in x[2:])
        return F.App(str(head), args, str(x[1]))
    if not isinstance(head, Symbol) or head not in F.OPERATORS or head in ("ctor", "state"):
        raise FormatSyntaxError(f"unknown operator {_show(head)}", x)
    return F.App(str(head), tuple(_formula(a, env) for a in x[1:]))


# -- problem reader ------------------------------------------------------------


def parse_problem(text: str) -> Problem:
    """Parse a problem file into a validated Problem."""
    try:
        forms = parse_sexprs(text)
    except SExprSyntaxError as e:
        err = FormatSyntaxError(str(e).split(": ", 1)[-1])
        err.line, err.col = e.line, e.col
        err.args = (str(e),)
        raise err from None
    if not forms:
        raise FormatSyntaxError("empty problem file")
    aliases: dict[str, Sort] = {}
    nts: dict[str, tuple[Any, Any, Any]] = {}
    prods: list[Production] = []
    rule_forms: list = []
    example_forms: list = []
    spec_forms: list = []
    builtin = None
    start = None
    name = ""
    for form in forms:
        if not _is_list(form) or not form or not isinstance(form[0], Symbol):
            raise FormatSyntaxError(f"expected a command, got {_show(form)}", form if hasattr(form, "line") else None)
        cmd = form[0]
        if cmd == "set-info":
            if len(form) != 3 or not isinstance(form[1], Keyword):
                raise FormatSyntaxError("set-info takes a keyword and a value", form)
            if form[1] == "name":
                name = str(form[2])
            elif form[1] == "format" and _int_value(form[2]) != FORMAT_VERSION:
                raise FormatSyntaxError(f"unsupported format version {form[2]}", form)
        elif cmd == "define-sort":
            if len(form) != 3 or not isinstance(form[1], Symbol):
                raise FormatSyntaxError("define-sort takes a name and a sort", form)
            aliases[str(form[1])] = parse_sort(form[2], aliases)
        elif cmd == "declare-nonterminal":
            if len(form) < 2 or not isinstance(form[1], Symbol):
                raise FormatSyntaxError("declare-nonterminal needs a name", form)
            kw = _keywords(form[2:], form)
            if str(form[1]) in nts:
                raise FormatSyntaxError(f"nonterminal {form[1]} declared twice", form)
            nts[str(form[1])] = (kw.get("input"), kw.get("output"), form)
        elif cmd == "production":
            if len(form) != 4 or not isinstance(form[1], Numeral) or not isinstance(form[2], Symbol):
                raise FormatSyntaxError("production takes an id, a nonterminal and an operator", form)
            body = form[3]
            if _is_list(body):
                if not body or not all(isinstance(a, Symbol) for a in body):
                    raise FormatSyntaxError("operator applications list nonterminal names", body)
                op, rhs = str(body[0]), tuple(str(a) for a in body[1:])
            else:
                op, rhs = str(body), ()
            prods.append(Production(int(form[1]), str(form[2]), op, rhs))
        elif cmd == "rule":
            rule_forms.append(form)
        elif cmd == "builtin-semantics":
            if len(form) < 2 or form[1] not in ("impv", "regex"):
                raise FormatSyntaxError("builtin-semantics is impv or regex", form)
            kw = _keywords(form[2:], form)
            if form[1] == "regex":
                try:
                    builtin = ("regex", int(kw["alphabet"]), int(kw["maxlen"]))
                except KeyError as e:
                    raise FormatSyntaxError(f"regex semantics needs :{e.args[0]}", form) from None
            else:
                builtin = ("impv",)
        elif cmd == "constraint":
            if len(form) != 2 or not _is_list(form[1]) or not form[1]:
                raise FormatSyntaxError("constraint takes one example or spec", form)
            if form[1][0] == "example":
                example_forms.append(form[1])
            elif form[1][0] == "spec":
                spec_forms.append(form[1])
            else:
                raise FormatSyntaxError(f"unknown constraint kind {_show(form[1][0])}", form)
        elif cmd == "synth-start":
            if len(form) != 2 or not isinstance(form[1], Symbol):
                raise FormatSyntaxError("synth-start takes a nonterminal", form)
            start = str(form[1])
        else:
            raise FormatSyntaxError(f"unknown command {cmd}", form)

    if not nts:
        raise FormatSyntaxError("no nonterminals declared", forms[0])
    if start is None:
        start = next(iter(nts))
    regex = builtin is not None and builtin[0] == "regex"
    if regex:
        _, alphabet, max_len = builtin
        if not prods:
            prods = list(regex_grammar(alphabet, start, max_len).productions)
        sorts_in = {n: string_state(max_len) for n in nts}
        sorts_out = {n: matrix_sort(max_len) for n in nts}
    else:
        sorts_in, sorts_out = {}, {}
        for n, (i, o, form) in nts.items():
            if i is None or o is None:
                raise FormatSyntaxError(f"nonterminal {n} needs :input and :output sorts", form)
            sorts_in[n] = parse_sort(i, aliases)
            sorts_out[n] = sorts_in[n] if o == "State" and isinstance(sorts_in[n], StateSort) else parse_sort(o, aliases)
    grammar = Grammar(sorts_out, start, tuple(prods))
    sigs = {sem_relation(n): RelationSig(n, (sorts_in[n],), (sorts_out[n],)) for n in nts}

    if builtin == ("impv",):
        in_sort = sorts_in[start]
        if not isinstance(in_sort, StateSort):
            raise FormatSortError("imperative semantics needs a state input sort")
        rules, sigs = build_impv_semantics(grammar, in_sort)
        semantics = {k: list(v) for k, v in rules.items()}
    elif regex:
        rules, sigs = regex_rules_for(grammar, builtin[2])
        semantics = {k: list(v) for k, v in rules.items()}
    else:
        semantics = {}
    for form in rule_forms:
        r = _parse_rule(form, grammar, sigs, aliases)
        semantics.setdefault(r.production, []).append(r)

    spec = _parse_spec(example_forms, spec_forms, sigs[sem_relation(start)], builtin)
    problem = Problem(grammar, semantics, spec, sigs, name, builtin)
    try:
        validate_problem(problem)
    except RuleError as e:
        raise FormatSortError(str(e)) from None
    return problem


def _parse_rule(form, g: Grammar, sigs, aliases) -> SemanticRule:
    if len(form) < 2 or not isinstance(form[1], Numeral):
        raise FormatSyntaxError("rule needs a production id", form)
    pid = int(form[1])
    if pid not in g.by_id:
        raise UnknownProduction(pid)
    kw = _keywords(form[2:], form)
    for key in ("vars", "head"):
        if key not in kw:
            raise FormatSyntaxError(f"rule is missing :{key}", form)
    vars_ = []
    for item in kw["vars"]:
        if not (_is_list(item) and len(item) == 2 and isinstance(item[0], Symbol)):
            raise FormatSyntaxError("rule variables are (name sort) pairs", kw["vars"])
        vars_.append((str(item[0]), parse_sort(item[1], aliases)))
    env = dict(vars_)
    body = tuple(_parse_atom(a, env, sigs) for a in kw.get("body", []))
    constraint = parse_formula(kw["constraint"], env) if "constraint" in kw else F.TRUE
    head = _parse_atom(kw["head"], env, sigs)
    return SemanticRule(pid, tuple(vars_), body, constraint, head, str(kw.get("name", "")))


def _parse_atom(x, env, sigs) -> RelationApp:
    if not _is_list(x) or not x or not isinstance(x[0], Symbol):
        raise FormatSyntaxError(f"malformed relation application {_show(x)}", x if hasattr(x, "line") else None)
    rel = str(x[0])
    sig = sigs.get(rel)
    if sig is None:
        raise FormatSortError(f"undeclared relation {rel}", x)
    args = x[1:]
    ni, no = len(sig.inputs), len(sig.outputs)
    if len(args) != ni + 1 + no:
        raise FormatSortError(f"{rel} takes {ni + 1 + no} arguments, got {len(args)}", x)
    term = args[ni]
    if not isinstance(term, Symbol) or not isinstance(env.get(term), TermSort):
        raise FormatSortError(f"argument {ni + 1} of {rel} must be a term variable", x)
    ins = tuple(parse_formula(a, env) for a in args[:ni])
    outs = tuple(parse_formula(a, env) for a in args[ni + 1:])
    return RelationApp(rel, ins, str(term), outs)


def _parse_spec(example_forms, spec_forms, start_sig: RelationSig, builtin) -> Specification:
    in_sort = start_sig.inputs[0]
    out_sort = start_sig.outputs[0]
    if not isinstance(in_sort, StateSort):
        raise FormatSortError("the start nonterminal needs a state input")
    env = {n: s for n, s in in_sort.fields}
    env[OUTPUT_VAR] = out_sort
    examples = []
    for form in example_forms:
        kw = _keywords(form[1:], form)
        if "string" in kw:
            if builtin is None or builtin[0] != "regex":
                raise FormatSyntaxError("string examples need regex semantics", form)
            s = [_int_value(c) for c in kw["string"]]
            accept = kw.get("accept")
            if None in s or accept not in ("true", "false"):
                raise FormatSyntaxError("string examples take :string (ints) and :accept true|false", form)
            examples.append(string_example(s, accept == "true", builtin[2]))
            continue
        if "input" not in kw or "output" not in kw:
            raise FormatSyntaxError("example needs :input and :output", form)
        inp = _pairs(kw["input"]) if _is_list(kw["input"]) else None
        if inp is None:
            raise FormatSyntaxError("example input is a list of (variable value) pairs", form)
        missing = set(in_sort.names) ^ set(inp)
        if missing:
            raise FormatSortError(f"example input variables {sorted(missing)} do not match the state", form)
        value = tuple(parse_value(inp[n], s) for n, s in in_sort.fields)
        examples.append(_parse_output(kw["output"], value, out_sort, env, form))
    formula = None
    if spec_forms:
        if len(spec_forms) > 1 or len(spec_forms[0]) != 2:
            raise FormatSyntaxError("at most one (spec <formula>) constraint", spec_forms[-1])
        formula = parse_formula(spec_forms[0][1], env)
        if formula.sort != BOOL:
            raise FormatSortError("spec formula must be Bool-sorted", spec_forms[0])
        if examples:
            raise FormatSyntaxError("use either examples or a spec formula, not both", spec_forms[0])
    return Specification(tuple(examples), formula)


def _parse_output(x, value, out_sort, env, form) -> Example:
    if isinstance(out_sort, StateSort) and _is_list(x):
        fields = _pairs(x)
        if fields is not None and fields and set(fields) <= set(out_sort.names):
            return Example(value, expected={n: parse_value(v, out_sort.field_sort(n)) for n, v in fields.items()})
    if not isinstance(out_sort, StateSort):
        try:
            return Example(value, expected=parse_value(x, out_sort))
        except FormatSortError:
            pass
    psi = parse_formula(x, env)
    if psi.sort != BOOL:
        raise FormatSortError("example output must be a value or a Bool formula", form)
    return Example(value, formula=psi)


# -- problem printer -----------------------------------------------------------


def print_problem(p: Problem) -> str:
    """Render ``p`` in the problem format; parse_problem inverts it."""
    if p.variant.kind != "standard":
        raise ProblemError("only problems with their original semantics can be printed")
    lines = [f"(set-info :format {FORMAT_VERSION})"]
    if p.name:
        lines.append(f'(set-info :name "{p.name}")')
    regex = p.builtin is not None and p.builtin[0] == "regex"
    for nt in p.grammar.nonterminals:
        if regex:
            lines.append(f"(declare-nonterminal {write_symbol(nt)})")
        else:
            sig = p.sig(nt)
            lines.append(f"(declare-nonterminal {write_symbol(nt)} :input {sig.inputs[0]} :output {sig.outputs[0]})")
    for prod in p.grammar.productions:
        op = write_symbol(prod.op) if not prod.op[:1].isdigit() else prod.op
        body = op if not prod.rhs else "(" + " ".join([op, *map(write_symbol, prod.rhs)]) + ")"
        lines.append(f"(production {prod.id} {write_symbol(prod.lhs)} {body})")
    if p.builtin is not None:
        if regex:
            lines.append(f"(builtin-semantics regex :alphabet {p.builtin[1]} :maxlen {p.builtin[2]})")
        else:
            lines.append("(builtin-semantics impv)")
    else:
        for pid, rules in p.semantics.items():
            for r in rules:
                lines.append(_print_rule(r))
    in_sort = p.input_sort
    for ex in p.spec.examples:
        inp = " ".join(f"({n} {value_to_sexpr(v, s)})" for (n, s), v in zip(in_sort.fields, ex.input))
        if ex.formula is not None:
            out = formula_to_sexpr(ex.formula)
        elif ex.expected_fields is not None:
            out_sort = p.output_sort
            out = "(" + " ".join(f"({n} {value_to_sexpr(v, out_sort.field_sort(n))})"
                                 for n, v in ex.expected_fields.items()) + ")"
        else:
            out = value_to_sexpr(ex.expected, p.output_sort)
        lines.append(f"(constraint (example :input ({inp}) :output {out}))")
    if p.spec.formula is not None:
        lines.append(f"(constraint (spec {formula_to_sexpr(p.spec.formula)}))")
    lines.append(f"(synth-start {write_symbol(p.start)})")
    return "\n".join(lines) + "\n"


def _print_atom(a: RelationApp) -> str:
    parts = [write_symbol(a.relation), *map(formula_to_sexpr, a.inputs), write_symbol(a.term),
             *map(formula_to_sexpr, a.outputs)]
    return "(" + " ".join(parts) + ")"


def _print_rule(r: SemanticRule) -> str:
    vars_ = " ".join(f"({write_symbol(n)} {s})" for n, s in r.vars)
    body = " ".join(_print_atom(a) for a in r.body)
    name = f" :name {write_symbol(r.name)}" if r.name else ""
    return (f"(rule {r.production}{name} :vars ({vars_}) :body ({body}) "
            f":constraint {formula_to_sexpr(r.constraint)} :head {_print_atom(r.head)})")


def load_problem(path) -> Problem:
    with open(path, encoding="utf-8") as fh:
        return parse_problem(fh.read())


__all__ = [
    "parse_problem", "print_problem", "load_problem", "parse_formula", "parse_sort", "parse_value",
    "FormatError", "FormatSyntaxError", "FormatSortError", "FORMAT_VERSION",
]
