"""Shared test utilities: problem loading and random term generation."""

from __future__ import annotations

import random
from functools import lru_cache
from pathlib import Path

from semgus.core.grammar import Grammar, Term
from semgus.frontend import load_problem

ROOT = Path(__file__).resolve().parent.parent


@lru_cache(maxsize=None)
def problem(rel: str):
    path = ROOT / "problems" / rel
    if not path.exists():
        path = Path(__file__).resolve().parent / "data" / rel
    return load_problem(path)


def random_term(g: Grammar, nt: str, max_size: int, rng: random.Random) -> Term:
    """A random term of size at most ``max_size`` (which must allow some term)."""
    choices = [p for p in g.by_lhs[nt] if (g.production_min_size(p.id) or max_size + 1) <= max_size]
    p = rng.choice(choices)
    budget = max_size - 1
    mins = [g.min_sizes[a] for a in p.rhs]
    spare = budget - sum(mins)
    kids = []
    for k, a in enumerate(p.rhs):
        extra = rng.randint(0, spare) if k < len(p.rhs) - 1 else spare
        extra = rng.randint(0, extra)
        spare -= extra
        kids.append(random_term(g, a, mins[k] + extra, rng))
    return Term(p.id, tuple(kids))


def xor_witness() -> Term:
    """while (x < y) do { x := x | y } in G_ex."""
    x, y = Term(6, ()), Term(7, ())
    return Term(1, (Term(2, (x, y)), Term(4, (Term(9, (x, y)),))))
