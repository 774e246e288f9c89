"""Typed regular tree grammars, production terms and pre-order listings."""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterator, Mapping, Sequence

from .sorts import Sort

Listing = tuple[int, ...]


class MalformedTerm(Exception):
    pass


class ParseFailure(Exception):
    def __init__(self, position: int, expected: str):
        super().__init__(f"listing does not parse: expected a {expected} production at position {position}")
        self.position = position
        self.expected = expected


class TrailingSymbols(Exception):
    def __init__(self, position: int, remainder: Listing):
        super().__init__(f"listing has trailing ids {list(remainder)} from position {position}")
        self.position = position
        self.remainder = remainder


@dataclass(frozen=True)
class Production:
    id: int
    lhs: str
    op: str
    rhs: tuple[str, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "rhs", tuple(self.rhs))

    @property
    def arity(self) -> int:
        return len(self.rhs)


@dataclass(frozen=True)
class Violation:
    kind: str  # duplicate-id | undeclared-nonterminal | unproductive | bad-id | missing-start
    detail: str


@dataclass
class ValidationReport:
    violations: list[Violation] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def kinds(self) -> set[str]:
        return {v.kind for v in self.violations}

    def __bool__(self) -> bool:
        return self.ok


@dataclass(frozen=True)
class Term:
    prod: int
    children: tuple["Term", ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "children", tuple(self.children))

    def __repr__(self) -> str:
        if not self.children:
            return str(self.prod)
        return f"{self.prod}({','.join(map(repr, self.children))})"


@dataclass(frozen=True, eq=False)
class Grammar:
    """A typed RTG.  ``nonterminals`` maps each nonterminal to its value sort."""

    nonterminals: Mapping[str, Sort]
    start: str
    productions: tuple[Production, ...]

    def __post_init__(self):
        object.__setattr__(self, "nonterminals", dict(self.nonterminals))
        object.__setattr__(self, "productions", tuple(self.productions))

    def __eq__(self, other):
        if not isinstance(other, Grammar):
            return NotImplemented
        return (self.nonterminals == other.nonterminals and self.start == other.start
                and self.productions == other.productions)

    def __hash__(self):
        return hash((self.start, self.productions))

    @cached_property
    def by_id(self) -> dict[int, Production]:
        return {p.id: p for p in self.productions}

    @cached_property
    def by_lhs(self) -> dict[str, tuple[Production, ...]]:
        out: dict[str, list[Production]] = {n: [] for n in self.nonterminals}
        for p in sorted(self.productions, key=lambda p: p.id):
            out.setdefault(p.lhs, []).append(p)
        return {k: tuple(v) for k, v in out.items()}

    def production(self, pid: int) -> Production:
        try:
            return self.by_id[pid]
        except KeyError:
            raise MalformedTerm(f"unknown production {pid}") from None

    def type_assignment(self, pid: int) -> tuple[Sort, tuple[Sort, ...]]:
        p = self.production(pid)
        return self.nonterminals[p.lhs], tuple(self.nonterminals[a] for a in p.rhs)

    @cached_property
    def min_sizes(self) -> dict[str, int | None]:
        """Smallest term size derivable from each nonterminal (None if unproductive)."""
        best: dict[str, int | None] = {n: None for n in self.nonterminals}
        changed = True
        while changed:
            changed = False
            for p in self.productions:
                if p.lhs not in best or any(best.get(a) is None for a in p.rhs):
                    continue
                size = 1 + sum(best[a] for a in p.rhs)
                if best[p.lhs] is None or size < best[p.lhs]:
                    best[p.lhs] = size
                    changed = True
        return best

    def production_min_size(self, pid: int) -> int | None:
        p = self.production(pid)
        sizes = [self.min_sizes.get(a) for a in p.rhs]
        if any(s is None for s in sizes):
            return None
        return 1 + sum(sizes)


def validate_grammar(g: Grammar) -> ValidationReport:
    report = ValidationReport()
    seen: dict[int, Production] = {}
    for p in g.productions:
        if not isinstance(p.id, int) or p.id <= 0:
            report.violations.append(Violation("bad-id", f"production id {p.id!r} is not a positive integer"))
        if p.id in seen:
            report.violations.append(Violation("duplicate-id", f"production id {p.id} used more than once"))
        seen[p.id] = p
        for n in (p.lhs, *p.rhs):
            if n not in g.nonterminals:
                report.violations.append(
                    Violation("undeclared-nonterminal", f"production {p.id} mentions undeclared {n}"))
    if g.start not in g.nonterminals:
        report.violations.append(Violation("missing-start", f"start symbol {g.start} is not declared"))
    if report.ok:
        for n, size in g.min_sizes.items():
            if size is None:
                report.violations.append(Violation("unproductive", f"nonterminal {n} derives no finite term"))
    return report


def check_term(g: Grammar, t: Term, nonterminal: str | None = None) -> None:
    p = g.production(t.prod)
    if nonterminal is not None and p.lhs != nonterminal:
        raise MalformedTerm(f"production {p.id} derives {p.lhs}, expected {nonterminal}")
    if len(t.children) != p.arity:
        raise MalformedTerm(f"production {p.id} has arity {p.arity}, term has {len(t.children)} children")
    for child, nt in zip(t.children, p.rhs):
        check_term(g, child, nt)


def root_nonterminal(g: Grammar, t: Term) -> str:
    return g.production(t.prod).lhs


def term_to_listing(g: Grammar, t: Term) -> Listing:
    check_term(g, t)
    out: list[int] = []

    def walk(u: Term):
        out.append(u.prod)
        for c in u.children:
            walk(c)

    walk(t)
    return tuple(out)


def parse_listing_prefix(g: Grammar, nonterminal: str, ids: Sequence[int], start: int = 0) -> tuple[Term, int]:
    """Parse one term for ``nonterminal`` from ``ids[start:]``; return it and the end position."""
    pos = start

    def parse(nt: str) -> Term:
        nonlocal pos
        if pos >= len(ids):
            raise ParseFailure(pos, nt)
        p = g.by_id.get(ids[pos])
        if p is None or p.lhs != nt:
            raise ParseFailure(pos, nt)
        pos += 1
        return Term(p.id, tuple(parse(a) for a in p.rhs))

    return parse(nonterminal), pos


def listing_to_term(g: Grammar, nonterminal: str, listing: Sequence[int]) -> Term:
    ids = tuple(listing)
    t, end = parse_listing_prefix(g, nonterminal, ids)
    if end != len(ids):
        raise TrailingSymbols(end, ids[end:])
    return t


def pending_nonterminals(g: Grammar, nonterminal: str, prefix: Sequence[int]) -> list[str] | None:
    """Nonterminals still to be derived after reading ``prefix`` (stack top first).

    Returns None if the prefix cannot start a listing for ``nonterminal``; an
    empty list means the prefix is already a complete listing.
    """
    stack = [nonterminal]
    for pid in prefix:
        if not stack:
            return None
        nt = stack.pop()
        p = g.by_id.get(pid)
        if p is None or p.lhs != nt:
            return None
        stack.extend(reversed(p.rhs))
    return list(reversed(stack))


def term_size(t: Term) -> int:
    return 1 + sum(term_size(c) for c in t.children)


def term_depth(t: Term) -> int:
    return 1 + max((term_depth(c) for c in t.children), default=0)


class TermEnumerator:
    """Enumerates L(N) by size; terms of equal size come in listing order."""

    def __init__(self, g: Grammar):
        self.grammar = g
        self._cache: dict[tuple[str, int], list[Term]] = {}

    def of_size(self, nonterminal: str, size: int) -> list[Term]:
        key = (nonterminal, size)
        if key in self._cache:
            return self._cache[key]
        out: list[Term] = []
        if size >= 1:
            for p in self.grammar.by_lhs.get(nonterminal, ()):
                out.extend(Term(p.id, kids) for kids in self._children(p.rhs, size - 1))
        out.sort(key=_listing_key)
        self._cache[key] = out
        return out

    def _children(self, rhs: tuple[str, ...], budget: int) -> Iterator[tuple[Term, ...]]:
        if not rhs:
            if budget == 0:
                yield ()
            return
        min_rest = sum(self.grammar.min_sizes.get(a) or budget + 1 for a in rhs[1:])
        first_min = self.grammar.min_sizes.get(rhs[0]) or budget + 1
        for s in range(first_min, budget - min_rest + 1):
            firsts = self.of_size(rhs[0], s)
            if not firsts:
                continue
            for rest in self._children(rhs[1:], budget - s):
                for f in firsts:
                    yield (f, *rest)

    def up_to(self, nonterminal: str, max_size: int) -> Iterator[Term]:
        for n in range(1, max_size + 1):
            yield from self.of_size(nonterminal, n)


def _listing_key(t: Term) -> Listing:
    out: list[int] = []

    def walk(u: Term):
        out.append(u.prod)
        for c in u.children:
            walk(c)

    walk(t)
    return tuple(out)


def enumerate_terms(g: Grammar, nonterminal: str, max_size: int) -> Iterator[Term]:
    return TermEnumerator(g).up_to(nonterminal, max_size)
