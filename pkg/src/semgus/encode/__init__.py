"""Compilation of problems to constrained Horn clauses."""

from .chc import (
    QUERY,
    Atom,
    ChcProgram,
    Clause,
    Representation,
    UnsupportedSort,
    check_program,
    emit_smtlib,
    make_clause,
)
from .encoder import (
    build_query,
    encode,
    encode_rule,
    encode_semantics,
    encode_syntax,
    fuse,
    query_clause,
)
from .transforms import make_abstract, make_bounded, vectorize

__all__ = [name for name in dir() if not name.startswith("_")]
