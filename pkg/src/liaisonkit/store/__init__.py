"""Paragraph-indexed store: filters, snapshot engine, persistence."""

from .engine import ParagraphStore, QueryPage, Snapshot, TermFrequencyPoint, term_frequency_csv
from .filters import (
    AllOf,
    AnyOf,
    Clause,
    Filter,
    Term,
    clause_from_json,
    clause_matches_tokens,
    clause_to_json,
    parse_keyword_expression,
)
from .persist import append_segment, init_store, load_store

__all__ = [
    "ParagraphStore", "QueryPage", "Snapshot", "TermFrequencyPoint", "term_frequency_csv",
    "AllOf", "AnyOf", "Clause", "Filter", "Term",
    "clause_from_json", "clause_matches_tokens", "clause_to_json", "parse_keyword_expression",
    "append_segment", "init_store", "load_store",
]
