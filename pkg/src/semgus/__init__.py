"""Semantics-guided synthesis: grammars with CHC semantics, solved via Horn clauses."""

__version__ = "0.1.0"
