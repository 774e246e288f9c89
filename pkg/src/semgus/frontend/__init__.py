"""Problem files and the built-in imperative and regex semantics."""

from .impv import (
    NotImpvSubgrammar,
    NotVerifiableSpec,
    build_abstract_semantics,
    build_bounded_semantics,
    build_impv_semantics,
    build_vectorized_semantics,
    subgrammar_of_impv,
    term_to_formula,
)
from .parser import FormatError, FormatSortError, FormatSyntaxError, load_problem, parse_problem, print_problem
from .problem import Example, Problem, ProblemError, Specification, SpecNotExamples, UnknownProduction, Variant
from .regex import build_regex_semantics, regex_grammar, string_example
from .surface import surface

__all__ = [name for name in dir() if not name.startswith("_")]
