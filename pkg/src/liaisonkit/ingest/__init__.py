"""Parsing of raw summary documents and synthetic corpus generation."""

from .parser import (
    BODY,
    HEADING,
    TABLE,
    UNKNOWN,
    Block,
    BlockCandidate,
    Paragraph,
    RawDocument,
    blocks_to_body,
    build_paragraphs,
    classify_blocks,
    load_corpus,
    paragraph_id,
    parse_document,
    read_documents_jsonl,
    scan_body,
    write_documents_jsonl,
)
from .synth import (
    CorpusConfig,
    RateSpec,
    TruthRecord,
    generate_synthetic_corpus,
    read_truth_jsonl,
    write_truth_jsonl,
)

__all__ = [
    "BODY", "HEADING", "TABLE", "UNKNOWN",
    "Block", "BlockCandidate", "Paragraph", "RawDocument",
    "blocks_to_body", "build_paragraphs", "classify_blocks", "load_corpus",
    "paragraph_id", "parse_document", "read_documents_jsonl", "scan_body",
    "write_documents_jsonl",
    "CorpusConfig", "RateSpec", "TruthRecord", "generate_synthetic_corpus",
    "read_truth_jsonl", "write_truth_jsonl",
]
