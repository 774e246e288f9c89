"""Semantic rules: one constrained Horn clause per rule, attached to a production."""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Mapping

from .formula import BOOL, Formula, Var
from .grammar import Grammar
from .sorts import Sort, TermSort


class RuleError(Exception):
    pass


def sem_relation(nonterminal: str) -> str:
    return f"sem_{nonterminal}"


@dataclass(frozen=True)
class RelationSig:
    """Signature of a semantic relation: ``sem_N(inputs..., term, outputs...)``."""

    nonterminal: str
    inputs: tuple[Sort, ...]
    outputs: tuple[Sort, ...]


@dataclass(frozen=True)
class RelationApp:
    relation: str
    inputs: tuple[Formula, ...]
    term: str
    outputs: tuple[Formula, ...]

    def __post_init__(self):
        object.__setattr__(self, "inputs", tuple(self.inputs))
        object.__setattr__(self, "outputs", tuple(self.outputs))

    def free_vars(self) -> frozenset[str]:
        fv = frozenset((self.term,))
        for f in (*self.inputs, *self.outputs):
            fv |= f.free_vars()
        return fv


@dataclass(frozen=True)
class SemanticRule:
    production: int
    vars: tuple[tuple[str, Sort], ...]
    body: tuple[RelationApp, ...]
    constraint: Formula
    head: RelationApp
    name: str = ""

    def __post_init__(self):
        object.__setattr__(self, "vars", tuple(self.vars))
        object.__setattr__(self, "body", tuple(self.body))

    @cached_property
    def sorts(self) -> dict[str, Sort]:
        return dict(self.vars)

    @cached_property
    def children(self) -> tuple[str, ...]:
        """Term variables standing for the production's children, in order."""
        return tuple(n for n, s in self.vars if isinstance(s, TermSort) and n != self.head.term)

    def var(self, name: str) -> Var:
        return Var(name, self.sorts[name])


def check_rule(rule: SemanticRule, g: Grammar, signatures: Mapping[str, RelationSig]) -> None:
    """Raise RuleError unless ``rule`` is a well-formed semantic rule for ``g``."""
    where = f"rule {rule.name or ''} of production {rule.production}".replace("  ", " ")
    prod = g.by_id.get(rule.production)
    if prod is None:
        raise RuleError(f"{where}: unknown production")
    names = [n for n, _ in rule.vars]
    if len(set(names)) != len(names):
        raise RuleError(f"{where}: duplicate variable declarations")
    sorts = rule.sorts
    if rule.constraint.sort != BOOL:
        raise RuleError(f"{where}: constraint is not Bool-sorted")
    head_term_sort = sorts.get(rule.head.term)
    if head_term_sort != TermSort(prod.lhs):
        raise RuleError(f"{where}: head term variable must have sort (Term {prod.lhs})")
    if rule.head.relation != sem_relation(prod.lhs):
        raise RuleError(f"{where}: head relation must be {sem_relation(prod.lhs)}")
    kids = rule.children
    if tuple(sorts[k].nonterminal for k in kids) != prod.rhs:
        raise RuleError(f"{where}: child term variables {kids} do not match right-hand side {prod.rhs}")
    declared = set(sorts)
    for atom in (rule.head, *rule.body):
        sig = signatures.get(atom.relation)
        if sig is None:
            raise RuleError(f"{where}: undeclared relation {atom.relation}")
        if atom.term not in declared or not isinstance(sorts[atom.term], TermSort):
            raise RuleError(f"{where}: {atom.relation} applied to non-term {atom.term}")
        if sorts[atom.term].nonterminal != sig.nonterminal:
            raise RuleError(f"{where}: {atom.relation} applied to a term of {sorts[atom.term].nonterminal}")
        if atom is not rule.head and atom.term != rule.head.term and atom.term not in kids:
            raise RuleError(f"{where}: premise on unknown term {atom.term}")
        if len(atom.inputs) != len(sig.inputs) or len(atom.outputs) != len(sig.outputs):
            raise RuleError(f"{where}: {atom.relation} applied to the wrong number of arguments")
        for f, s in zip((*atom.inputs, *atom.outputs), (*sig.inputs, *sig.outputs)):
            if f.sort != s:
                raise RuleError(f"{where}: {atom.relation} argument of sort {f.sort}, expected {s}")
    used = rule.constraint.free_vars()
    for atom in (rule.head, *rule.body):
        used |= atom.free_vars()
    undeclared = used - declared
    if undeclared:
        raise RuleError(f"{where}: undeclared variables {sorted(undeclared)}")
    self_rel = sem_relation(prod.lhs)
    for atom in rule.body:
        if atom.term == rule.head.term and atom.relation != self_rel:
            raise RuleError(f"{where}: recursive premise must use {self_rel}")
