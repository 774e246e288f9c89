"""Run several strategies side by side; the first definitive answer wins."""

from __future__ import annotations

import threading
from concurrent.futures import FIRST_COMPLETED, ThreadPoolExecutor, wait
from typing import Sequence

from ..frontend.problem import Problem
from ..interp.engine import DEFAULT_FUEL
from .driver import Cancelled, SolverConfig
from .result import SolveResult
from .strategies import Strategy, run_strategy


class AllUnknown(Exception):
    """Every strategy ended without a definitive answer."""

    def __init__(self, results: Sequence[SolveResult]):
        self.results = tuple(results)
        reasons = ", ".join(f"{r.strategy}: {r.reason}" for r in self.results)
        super().__init__(f"no strategy succeeded ({reasons})")


DEFAULT_STRATEGIES = (
    Strategy("enum"),
    Strategy("chc", "array", vectorized=True, fused=True),
    Strategy("chc", "list", vectorized=True, fused=True),
    Strategy("chc", "array"),
    Strategy("chc", "tree"),
)


def portfolio_solve(p: Problem, cfg: SolverConfig | None = None, strategies: Sequence[Strategy] = DEFAULT_STRATEGIES,
                    max_size: int = 8, fuel: int = DEFAULT_FUEL) -> SolveResult:
    """Each strategy runs in its own thread (solver calls are child processes)."""
    if not strategies:
        raise ValueError("a portfolio needs at least one strategy")
    cancel = threading.Event()

    def attempt(s: Strategy) -> SolveResult:
        try:
            return run_strategy(p, s, cfg, max_size, fuel, cancel).with_strategy(s.label)
        except Cancelled:
            return SolveResult.unknown("cancelled", strategy=s.label)
        except Exception as e:  # a failing strategy must not sink the others
            return SolveResult.unknown("error", f"{type(e).__name__}: {e}", strategy=s.label)

    done_results: list[SolveResult] = []
    with ThreadPoolExecutor(max_workers=len(strategies)) as pool:
        pending = {pool.submit(attempt, s) for s in strategies}
        winner = None
        while pending and winner is None:
            done, pending = wait(pending, return_when=FIRST_COMPLETED)
            for fut in done:
                r = fut.result()
                done_results.append(r)
                if r.definitive and winner is None:
                    winner = r
        cancel.set()
    if winner is None:
        raise AllUnknown(done_results)
    return winner


__all__ = ["portfolio_solve", "AllUnknown", "DEFAULT_STRATEGIES"]
