"""Horn-solver driving, witness extraction, enumeration, CEGIS and portfolios."""

from .cegis import DEFAULT_MAX_ITER, cegis, parse_model, verification_script, verify
from .driver import (
    DEFAULT_TIME_LIMIT,
    ENV_SOLVER,
    EXTRACTION_SAFE_FLAGS,
    Cancelled,
    ChcAnswer,
    SolverConfig,
    SolverError,
    SolverNotFound,
    SolverTimeout,
    run_chc,
    run_script,
)
from .portfolio import DEFAULT_STRATEGIES, AllUnknown, portfolio_solve
from .result import REALIZABLE, UNKNOWN, UNREALIZABLE, SolveResult
from .strategies import (
    DEFAULT_MAX_LISTING,
    ExtractionFailed,
    Strategy,
    chc_solve,
    enumerate_solve,
    extract_by_prefix_refinement,
    run_strategy,
)

__all__ = [name for name in dir() if not name.startswith("_")]
