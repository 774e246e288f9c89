"""Problems: a grammar, its semantic rules and a behavioural specification."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Mapping

from ..core.formula import Const, Formula, Var, conj, eq, get_field, substitute
from ..core.grammar import Grammar, validate_grammar
from ..core.rules import RelationSig, SemanticRule, check_rule, sem_relation
from ..core.sorts import Sort, StateSort
from ..core import formula as F

OUTPUT_VAR = "o"


class ProblemError(Exception):
    """Base class for problems that are ill-formed."""


class UnknownProduction(ProblemError):
    def __init__(self, pid: int):
        super().__init__(f"unknown production {pid}")
        self.pid = pid


class SpecNotExamples(ProblemError):
    pass


@dataclass(frozen=True)
class Example:
    """One input/output pair.

    ``expected`` is a concrete output: a value for scalar outputs, or a mapping
    from field names to values for state outputs (unlisted fields are
    don't-cares).  ``formula`` is an output constraint over ``o`` and the input
    variable names instead.  Exactly one of the two is set.
    """

    input: tuple
    expected: Any = None
    formula: Formula | None = None

    def __post_init__(self):
        if (self.expected is None) == (self.formula is None):
            raise ProblemError("an example needs exactly one of an expected value or an output formula")
        if isinstance(self.expected, Mapping):
            object.__setattr__(self, "expected", tuple(sorted(self.expected.items())))

    @property
    def expected_fields(self) -> dict[str, Any] | None:
        if isinstance(self.expected, tuple):
            return dict(self.expected)
        return None

    def constraint(self, out: Formula, in_sort: StateSort) -> Formula:
        """The output constraint psi(e, o) with ``o`` bound to ``out``."""
        if self.formula is not None:
            env = {n: Const(v, s) for (n, s), v in zip(in_sort.fields, self.input)}
            env_sorts = {n: s for n, s in in_sort.fields}
            return instantiate(self.formula, out, env, env_sorts)
        fields = self.expected_fields
        if fields is None:
            return eq(out, Const(self.expected, out.sort))
        parts = []
        for name, value in fields.items():
            g = get_field(name, out)
            parts.append(eq(g, Const(value, g.sort)))
        return conj(parts)


def instantiate(psi: Formula, out: Formula, inputs: Mapping[str, Formula], input_sorts: Mapping[str, Sort]) -> Formula:
    """Replace ``o`` by ``out`` and input names by their values, rebuilding sorts."""

    def go(f: Formula) -> Formula:
        if isinstance(f, Var):
            if f.name == OUTPUT_VAR:
                return out
            if f.name in inputs and input_sorts.get(f.name) == f.sort:
                return inputs[f.name]
            return f
        if isinstance(f, F.App):
            return F.App(f.op, tuple(go(a) for a in f.args), f.index, f.declared)
        return f

    return go(psi)


@dataclass(frozen=True)
class Specification:
    """Input/output examples, or a logical formula over the inputs and ``o``."""

    examples: tuple[Example, ...] = ()
    formula: Formula | None = None
    verifiable: bool = True

    @property
    def kind(self) -> str:
        return "formula" if self.formula is not None else "examples"

    def with_examples(self, examples) -> "Specification":
        return Specification(tuple(examples), self.formula, self.verifiable)


@dataclass(frozen=True)
class Variant:
    """Which derived semantics a problem carries (set by the encode transforms)."""

    kind: str = "standard"  # standard | vectorized | abstract | bounded
    n: int = 1
    bit: int = 0
    mode: str = ""
    bound: int = 0


@dataclass(frozen=True, eq=False)
class Problem:
    grammar: Grammar
    semantics: Mapping[int, tuple[SemanticRule, ...]]
    spec: Specification
    signatures: Mapping[str, RelationSig]
    name: str = ""
    builtin: tuple | None = None
    variant: Variant = field(default_factory=Variant)
    base: "Problem | None" = None

    def __post_init__(self):
        object.__setattr__(self, "semantics", {k: tuple(v) for k, v in sorted(self.semantics.items())})
        object.__setattr__(self, "signatures", dict(self.signatures))

    def __eq__(self, other):
        if not isinstance(other, Problem):
            return NotImplemented
        return (self.grammar == other.grammar and self.semantics == other.semantics
                and self.spec == other.spec and self.signatures == other.signatures
                and self.name == other.name and self.variant == other.variant)

    __hash__ = object.__hash__

    @property
    def start(self) -> str:
        return self.grammar.start

    def sig(self, nonterminal: str) -> RelationSig:
        return self.signatures[sem_relation(nonterminal)]

    @property
    def input_sort(self) -> StateSort:
        ins = self.sig(self.start).inputs
        if len(ins) != 1 or not isinstance(ins[0], StateSort):
            raise ProblemError("the start nonterminal must take a single state input")
        return ins[0]

    @property
    def output_sort(self) -> Sort:
        outs = self.sig(self.start).outputs
        if len(outs) != 1:
            raise ProblemError("the start nonterminal must produce a single output")
        return outs[0]

    @property
    def original(self) -> "Problem":
        p = self
        while p.base is not None:
            p = p.base
        return p

    def replace(self, **changes) -> "Problem":
        data = dict(grammar=self.grammar, semantics=self.semantics, spec=self.spec,
                    signatures=self.signatures, name=self.name, builtin=self.builtin,
                    variant=self.variant, base=self.base)
        data.update(changes)
        return Problem(**data)


def validate_problem(p: Problem) -> None:
    report = validate_grammar(p.grammar)
    if not report.ok:
        raise ProblemError("; ".join(v.detail for v in report.violations))
    for pid in p.semantics:
        if pid not in p.grammar.by_id:
            raise UnknownProduction(pid)
    for prod in p.grammar.productions:
        if not p.semantics.get(prod.id):
            raise ProblemError(f"production {prod.id} has no semantic rule")
    for rules in p.semantics.values():
        for r in rules:
            check_rule(r, p.grammar, p.signatures)
    if p.spec.kind == "examples":
        if not p.spec.examples:
            raise ProblemError("example specification is empty")
        if p.variant.kind == "standard":
            in_sort = p.input_sort
            for ex in p.spec.examples:
                F.coerce_value(ex.input, in_sort)


def example_output_var(i: int, sort: Sort) -> Var:
    return Var(f"o{i}", sort)


def require_examples(p: Problem) -> tuple[Example, ...]:
    if p.spec.kind != "examples" or not p.spec.examples:
        raise SpecNotExamples("this operation needs an example specification")
    return p.spec.examples


__all__ = [
    "Example", "Specification", "Problem", "Variant", "ProblemError", "UnknownProduction",
    "SpecNotExamples", "validate_problem", "instantiate", "OUTPUT_VAR", "require_examples",
    "example_output_var", "substitute",
]
