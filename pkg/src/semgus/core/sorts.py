"""Sorts for semantic values, theory formulas and term representations."""

from __future__ import annotations

from dataclasses import dataclass


class Sort:
    """Base class; concrete sorts are frozen dataclasses and compare by value."""

    def is_scalar(self) -> bool:
        return not isinstance(self, (StateSort, VectorSort))


@dataclass(frozen=True)
class IntSort(Sort):
    def __str__(self) -> str:
        return "Int"


@dataclass(frozen=True)
class BoolSort(Sort):
    def __str__(self) -> str:
        return "Bool"


@dataclass(frozen=True)
class BitVecSort(Sort):
    width: int

    def __post_init__(self):
        if self.width < 1:
            raise ValueError(f"bit-vector width must be positive, got {self.width}")

    def __str__(self) -> str:
        return f"(BitVec {self.width})"


@dataclass(frozen=True)
class ArraySort(Sort):
    """Integer-indexed integer arrays (`IntArray`)."""

    def __str__(self) -> str:
        return "(Array Int Int)"


@dataclass(frozen=True)
class StateSort(Sort):
    """A record of named variables; the field order is the tuple layout."""

    fields: tuple[tuple[str, Sort], ...]

    def __post_init__(self):
        names = [n for n, _ in self.fields]
        if len(set(names)) != len(names):
            raise ValueError(f"duplicate state variable in {names}")
        for _, s in self.fields:
            if isinstance(s, (StateSort, VectorSort, TermSort)):
                raise ValueError("state fields must have base sorts")

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(n for n, _ in self.fields)

    def index(self, name: str) -> int:
        for i, (n, _) in enumerate(self.fields):
            if n == name:
                return i
        raise KeyError(name)

    def field_sort(self, name: str) -> Sort:
        return self.fields[self.index(name)][1]

    def __str__(self) -> str:
        inner = " ".join(f"({n} {s})" for n, s in self.fields)
        return f"(State {inner})"


@dataclass(frozen=True)
class VectorSort(Sort):
    elem: Sort
    length: int

    def __post_init__(self):
        if self.length < 1:
            raise ValueError(f"vector length must be positive, got {self.length}")

    def __str__(self) -> str:
        return f"(Vector {self.elem} {self.length})"


@dataclass(frozen=True)
class TermSort(Sort):
    """Sort of term variables in semantic rules (also the tree-encoding datatype)."""

    nonterminal: str

    def __str__(self) -> str:
        return f"(Term {self.nonterminal})"


@dataclass(frozen=True)
class ListSort(Sort):
    """Inductive integer lists, used by the list listing representation."""

    def __str__(self) -> str:
        return "(List Int)"


INT = IntSort()
BOOL = BoolSort()
ARRAY = ArraySort()
LIST = ListSort()


def bv(width: int) -> BitVecSort:
    return BitVecSort(width)


def state(*fields: tuple[str, Sort]) -> StateSort:
    return StateSort(tuple(fields))
