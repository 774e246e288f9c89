"""Derived semantics for imperative problems: vectorized, abstract and loop-bounded."""

from __future__ import annotations

from ..frontend.impv import (
    NotImpvSubgrammar,
    build_abstract_semantics,
    build_bounded_semantics,
    build_vectorized_semantics,
    subgrammar_of_impv,
)
from ..frontend.problem import Problem, ProblemError, Variant


def _state(p: Problem):
    st = p.input_sort
    if not subgrammar_of_impv(p.grammar, st):
        for prod in p.grammar.productions:
            try:
                from ..frontend.impv import classify

                classify(p.grammar, prod, st)
            except NotImpvSubgrammar as e:
                raise e from None
        raise NotImpvSubgrammar(0)
    return st


def _require_standard(p: Problem) -> None:
    if p.variant.kind != "standard":
        raise ProblemError(f"expected a problem with standard semantics, got {p.variant.kind}")


def vectorize(p: Problem, n: int | None = None) -> Problem:
    """Vectorized semantics over ``n`` entries (default: one per example)."""
    _require_standard(p)
    st = _state(p)
    if n is None:
        n = len(p.spec.examples)
    if n < 1:
        raise ValueError("vector length must be positive")
    rules, sigs = build_vectorized_semantics(p.grammar, n, st)
    return p.replace(semantics=rules, signatures=sigs, variant=Variant("vectorized", n=n), base=p, builtin=None)


def make_abstract(p: Problem, bit: int, mode: str = "join") -> Problem:
    """B_bit abstraction; ``mode`` picks the while rule (havoc or join)."""
    _require_standard(p)
    st = _state(p)
    rules, sigs = build_abstract_semantics(p.grammar, bit, mode, st)
    return p.replace(semantics=rules, signatures=sigs, variant=Variant("abstract", bit=bit, mode=mode),
                     base=p, builtin=None)


def make_bounded(p: Problem, k: int) -> Problem:
    """Loop-bounded semantics; examples start with the shared counter at ``k``."""
    _require_standard(p)
    if k < 0:
        raise ValueError("the bound must be non-negative")
    st = _state(p)
    rules, sigs = build_bounded_semantics(p.grammar, st)
    return p.replace(semantics=rules, signatures=sigs, variant=Variant("bounded", bound=k), base=p, builtin=None)
