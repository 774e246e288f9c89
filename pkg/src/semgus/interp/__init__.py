"""Reference interpreters for executable semantics."""

from .api import (
    ABS_FALSE,
    ABS_TRUE,
    BOTTOM,
    TOP,
    ExampleChecker,
    abs_join,
    alpha,
    check_examples,
    eval,
    eval_abstract,
    eval_bounded,
    eval_vectorized,
    in_gamma,
    interpreter,
    regex_accepts,
    regex_matrix,
)
from .engine import (
    DEFAULT_FUEL,
    DIVERGED,
    UNDEFINED,
    Interpreter,
    InterpreterError,
    NondeterministicRules,
    NotExecutable,
    StuckNoRule,
)

__all__ = [name for name in dir() if not name.startswith("_")]
