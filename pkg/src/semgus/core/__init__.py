"""Domain model: sorts, formulas, grammars, terms, listings and semantic rules."""

from .formula import (
    FALSE,
    TRUE,
    App,
    ArrayBoundsError,
    Const,
    EvaluationError,
    Formula,
    SortError,
    Var,
    app,
    conj,
    disj,
    eq,
    evaluate,
    get_field,
    ite,
    neg,
    record,
    set_field,
)
from .grammar import (
    Grammar,
    Listing,
    MalformedTerm,
    ParseFailure,
    Production,
    Term,
    TermEnumerator,
    TrailingSymbols,
    ValidationReport,
    Violation,
    enumerate_terms,
    listing_to_term,
    term_size,
    term_to_listing,
    validate_grammar,
)
from .rules import RelationApp, RelationSig, RuleError, SemanticRule, check_rule, sem_relation
from .sorts import (
    ARRAY,
    BOOL,
    INT,
    LIST,
    ArraySort,
    BitVecSort,
    BoolSort,
    IntSort,
    ListSort,
    Sort,
    StateSort,
    TermSort,
    VectorSort,
    bv,
    state,
)

__all__ = [name for name in dir() if not name.startswith("_")]
