"""Termination and non-termination certificates for string and cycle rewriting."""

__version__ = "0.1.0"

from .rewriting import (
    ParseError,
    RewriteSystem,
    Rule,
    canonical_rotation,
    cycle_successors,
    cyclic_contains_factor,
    parse_system,
    string_successors,
)

__all__ = [
    "ParseError",
    "RewriteSystem",
    "Rule",
    "canonical_rotation",
    "cycle_successors",
    "cyclic_contains_factor",
    "parse_system",
    "string_successors",
    "__version__",
]
