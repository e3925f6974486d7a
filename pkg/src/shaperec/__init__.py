"""SHACL validation with recursive shapes and translation into SCL."""

from .errors import (
    DocumentError,
    OracleBudgetExceeded,
    ParseError,
    RecursionNotAllowed,
    SearchBudgetExceeded,
    ShapeRecError,
    ShapesError,
    UnsupportedFeature,
    UnsupportedVocabulary,
)
from .evaluation import Assignment, TruthValue, eval_constraint, is_faithful, is_total, node_universe
from .parsing import load_graph, parse_ntriples, parse_turtle_subset, serialize_ntriples
from .rdf import BlankNode, Graph, Iri, Literal, Triple
from .reader import read_document
from .scl import fragment_of, render, translate, well_formed
from .semantics import Mode, ValidationResult, brute_force_validate, monotone_extension_check, validate
from .shapes import Document, Shape, fragment_letters, is_recursive

__all__ = [
    "Assignment", "BlankNode", "Document", "DocumentError", "Graph", "Iri", "Literal", "Mode",
    "OracleBudgetExceeded", "ParseError", "RecursionNotAllowed", "SearchBudgetExceeded", "Shape",
    "ShapeRecError", "ShapesError", "Triple", "TruthValue", "UnsupportedFeature",
    "UnsupportedVocabulary", "ValidationResult", "brute_force_validate", "eval_constraint",
    "fragment_letters", "fragment_of", "is_faithful", "is_recursive", "is_total", "load_graph",
    "monotone_extension_check", "node_universe", "parse_ntriples", "parse_turtle_subset",
    "read_document", "render", "serialize_ntriples", "translate", "validate", "well_formed",
]
