"""CHC-based solving with term extraction, and the enumerative baseline."""

from __future__ import annotations

import threading
from dataclasses import dataclass

from ..core.grammar import Grammar, Term, TermEnumerator, listing_to_term, pending_nonterminals
from ..encode.chc import Representation, emit_smtlib
from ..encode.encoder import build_query
from ..encode.transforms import vectorize
from ..frontend.problem import Problem
from ..interp.api import ExampleChecker
from ..interp.engine import DEFAULT_FUEL, NotExecutable
from .driver import Cancelled, SolverConfig, SolverError, SolverNotFound, SolverTimeout, run_chc
from .result import SolveResult

DEFAULT_MAX_LISTING = 64


class ExtractionFailed(Exception):
    pass


@dataclass(frozen=True)
class Strategy:
    mode: str = "chc"  # chc | enum
    rep: str = "array"
    vectorized: bool = False
    fused: bool = False

    @property
    def label(self) -> str:
        if self.mode == "enum":
            return "enum"
        parts = [self.mode, self.rep]
        if self.vectorized:
            parts.append("vectorized")
        if self.fused:
            parts.append("fused")
        return "/".join(parts)


def _prepare(p: Problem, vectorized: bool) -> Problem:
    if vectorized and p.variant.kind == "standard":
        return vectorize(p)
    return p


def _ask(p: Problem, rep, fused: bool, cfg: SolverConfig, prefix=(), cancel=None) -> str:
    script = emit_smtlib(build_query(p, rep, fused, prefix))
    return run_chc(script, cfg, cancel).status


def _candidates(g: Grammar, nt: str) -> list[int]:
    """Productions of ``nt`` that derive some term, smallest first, then by id."""
    prods = [p for p in g.by_lhs.get(nt, ()) if g.production_min_size(p.id) is not None]
    return [p.id for p in sorted(prods, key=lambda p: (g.production_min_size(p.id), p.id))]


def extract_by_prefix_refinement(p: Problem, rep=Representation.ARRAY, cfg: SolverConfig | None = None,
                                 max_len: int = DEFAULT_MAX_LISTING, fused: bool = False,
                                 cancel: threading.Event | None = None) -> Term:
    """Fix the listing one production at a time, keeping each choice realizable.

    Assumes the problem itself was found realizable.  When every other
    candidate at a position is definitely unrealizable the remaining one is
    taken without asking.
    """
    cfg = cfg or SolverConfig()
    rep = Representation(rep)
    if rep is Representation.TREE:
        raise ValueError("prefix refinement needs a list or array representation")
    g = p.grammar
    prefix: list[int] = []
    while True:
        pending = pending_nonterminals(g, g.start, prefix)
        if pending is None:
            raise ExtractionFailed(f"prefix {prefix} is not a listing prefix")
        if not pending:
            return listing_to_term(g, g.start, prefix)
        if len(prefix) >= max_len:
            raise ExtractionFailed(f"listing longer than {max_len}")
        options = _candidates(g, pending[0])
        chosen = None
        all_refuted = True
        for k, d in enumerate(options):
            if k == len(options) - 1 and all_refuted:
                chosen = d
                break
            try:
                status = _ask(p, rep, fused, cfg, prefix + [d], cancel)
            except SolverTimeout:
                status = "unknown"
            if status == "unsat":
                chosen = d
                break
            if status != "sat":
                all_refuted = False
        if chosen is None:
            raise ExtractionFailed(f"no production extends prefix {prefix}")
        prefix.append(chosen)


def _verify(p: Problem, t: Term, fuel: int) -> bool | None:
    """Example check on the original problem; None when its rules cannot be executed."""
    try:
        return ExampleChecker(p.original, fuel).check(t)
    except NotExecutable:
        return None


def chc_solve(p: Problem, rep=Representation.ARRAY, vectorized: bool = False, fused: bool = False,
              cfg: SolverConfig | None = None, extract: bool = True, max_len: int = DEFAULT_MAX_LISTING,
              fuel: int = DEFAULT_FUEL, cancel: threading.Event | None = None) -> SolveResult:
    """Encode, solve, and on success extract and re-check a witness."""
    cfg = cfg or SolverConfig()
    rep = Representation(rep)
    q = _prepare(p, vectorized)
    kind = q.variant.kind
    label = Strategy("chc", rep.value, kind == "vectorized", fused).label
    if kind in ("abstract", "bounded"):
        label += f"/{kind}"
    try:
        ans = run_chc(emit_smtlib(build_query(q, rep, fused)), cfg, cancel)
    except SolverTimeout as e:
        return SolveResult.unknown("timeout", str(e), strategy=label)
    except (SolverError, SolverNotFound) as e:
        return SolveResult.unknown("solverError", str(e), strategy=label)
    stats = {"seconds": round(ans.seconds, 3)}
    if ans.status == "unknown":
        return SolveResult.unknown("solverUnknown", ans.text.strip(), strategy=label, stats=stats)
    if ans.status == "sat":
        if kind == "bounded":
            return SolveResult.unknown("inconclusive", "no solution within the loop bound", strategy=label, stats=stats)
        return SolveResult.unrealizable(strategy=label, stats=stats)
    if kind == "abstract":
        return SolveResult.unknown("inconclusive", "the abstraction admits a solution", strategy=label, stats=stats)
    if not extract:
        return SolveResult.unknown("extractionSkipped", "realizable; no witness requested", strategy=label, stats=stats)
    xrep = Representation.ARRAY if rep is Representation.TREE else rep
    try:
        t = extract_by_prefix_refinement(q, xrep, cfg, max_len, fused and xrep is rep, cancel)
    except ExtractionFailed as e:
        return SolveResult.unknown("extractionFailed", str(e), strategy=label, stats=stats)
    except (SolverError, SolverNotFound) as e:
        return SolveResult.unknown("solverError", str(e), strategy=label, stats=stats)
    ok = _verify(q, t, fuel)
    if ok is False:
        return SolveResult.unknown("extractionFailed", f"extracted term {t!r} fails the examples",
                                   strategy=label, stats=stats)
    stats["verified"] = "interpreter" if ok else "solver"
    return SolveResult.realizable(t, "prefixRefinement", strategy=label, stats=stats)


def enumerate_solve(p: Problem, max_size: int = 8, fuel: int = DEFAULT_FUEL,
                    cancel: threading.Event | None = None) -> SolveResult:
    """First term, by size then listing, that meets every example."""
    checker = ExampleChecker(p, fuel)
    g = p.original.grammar
    tried = 0
    for t in TermEnumerator(g).up_to(g.start, max_size):
        if cancel is not None and cancel.is_set():
            raise Cancelled()
        tried += 1
        if checker.check(t):
            return SolveResult.realizable(t, "enumeration", strategy="enum", stats={"terms": tried})
    return SolveResult.unknown("enumerationBound", f"no term up to size {max_size}", strategy="enum",
                               stats={"terms": tried})


def run_strategy(p: Problem, s: Strategy, cfg: SolverConfig | None = None, max_size: int = 8,
                 fuel: int = DEFAULT_FUEL, cancel: threading.Event | None = None) -> SolveResult:
    if s.mode == "enum":
        return enumerate_solve(p, max_size, fuel, cancel)
    if s.mode == "chc":
        return chc_solve(p, s.rep, s.vectorized, s.fused, cfg, fuel=fuel, cancel=cancel)
    raise ValueError(f"unknown strategy mode {s.mode!r}")


__all__ = [
    "Strategy", "ExtractionFailed", "extract_by_prefix_refinement", "chc_solve", "enumerate_solve",
    "run_strategy", "DEFAULT_MAX_LISTING",
]
