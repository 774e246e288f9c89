"""Outcomes of a synthesis attempt."""

from __future__ import annotations

from dataclasses import dataclass, field, replace

from ..core.grammar import Term

REALIZABLE = "realizable"
UNREALIZABLE = "unrealizable"
UNKNOWN = "unknown"


@dataclass(frozen=True)
class SolveResult:
    kind: str
    term: Term | None = None
    source: str = ""  # derivation | prefixRefinement | enumeration
    reason: str = ""  # why the answer is unknown
    detail: str = ""
    strategy: str = ""
    examples: tuple = ()
    stats: dict = field(default_factory=dict, compare=False)

    @staticmethod
    def realizable(term: Term, source: str, **kw) -> "SolveResult":
        return SolveResult(REALIZABLE, term, source, **kw)

    @staticmethod
    def unrealizable(**kw) -> "SolveResult":
        return SolveResult(UNREALIZABLE, **kw)

    @staticmethod
    def unknown(reason: str, detail: str = "", **kw) -> "SolveResult":
        return SolveResult(UNKNOWN, reason=reason, detail=detail, **kw)

    @property
    def definitive(self) -> bool:
        return self.kind != UNKNOWN

    def with_strategy(self, label: str) -> "SolveResult":
        return replace(self, strategy=label)


__all__ = ["SolveResult", "REALIZABLE", "UNREALIZABLE", "UNKNOWN"]
