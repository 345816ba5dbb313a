"""Line-oriented document markup -> typed blocks -> paragraph records.

The raw body format stands in for word-processor styling:

* ``## `` prefix      heading
* ``- `` prefix       bullet (its own BODY block)
* ``| `` prefix       table row; consecutive rows form one TABLE block
* anything else       prose; blank lines separate paragraphs

A ``#``-prefixed line that is not exactly a ``## `` heading is treated as a
malformed marker and rejected with its line number.
"""

from __future__ import annotations

import datetime as dt
import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Iterator

from ..errors import ParseError, ValidationError
from ..text import sentence_spans, tokenize

HEADING = "HEADING"
BODY = "BODY"
TABLE = "TABLE"
UNKNOWN = "UNKNOWN"

REGIONS = {"NSW", "VIC", "QLD", "SA", "WA", "TAS", "NT", "ACT"}
HEADCOUNT_BUCKETS = {"small", "medium", "large"}
STAFF_SCORE_NAMES = (
    "wages", "expected_wages", "employment_intentions", "prices", "expected_prices",
)

# Prose-group heading heuristic: short, no terminal period, title/upper case.
_HEADING_MAX_TOKENS = 8


@dataclass(frozen=True)
class RawDocument:
    liaison_id: str
    meeting_date: dt.date
    firm_id: str
    industry_code: str
    region: str
    headcount_bucket: str
    staff_scores: dict[str, int]
    body: str

    def validate(self) -> None:
        if not self.liaison_id:
            raise ValidationError("liaison_id is empty")
        if not isinstance(self.meeting_date, dt.date):
            raise ValidationError(f"{self.liaison_id}: meeting_date is not a date")
        if not (len(self.industry_code) == 4 and self.industry_code.isdigit()):
            raise ValidationError(f"{self.liaison_id}: industry_code must be a 4-digit code")
        if self.region not in REGIONS:
            raise ValidationError(f"{self.liaison_id}: unknown region {self.region!r}")
        if self.headcount_bucket not in HEADCOUNT_BUCKETS:
            raise ValidationError(f"{self.liaison_id}: bad headcount bucket {self.headcount_bucket!r}")
        for name, score in self.staff_scores.items():
            if not isinstance(score, int) or not -5 <= score <= 5:
                raise ValidationError(f"{self.liaison_id}: staff score {name}={score!r} outside [-5, 5]")


@dataclass(frozen=True)
class Block:
    kind: str
    text: str
    order: int


@dataclass(frozen=True)
class BlockCandidate:
    """Pre-classification block: raw text plus style hints."""

    text: str
    marker: str  # "heading" | "bullet" | "table" | "none"
    order: int


@dataclass(frozen=True)
class Paragraph:
    paragraph_id: str
    liaison_ref: str
    heading_context: str
    text: str
    word_count: int
    sentence_spans: tuple[tuple[int, int], ...] = field(default_factory=tuple)


def scan_body(body: str) -> list[BlockCandidate]:
    """Group body lines into block candidates carrying marker hints."""
    candidates: list[BlockCandidate] = []
    prose: list[str] = []
    table: list[str] = []

    def flush_prose() -> None:
        if prose:
            candidates.append(BlockCandidate(" ".join(prose), "none", len(candidates)))
            prose.clear()

    def flush_table() -> None:
        if table:
            candidates.append(BlockCandidate("\n".join(table), "table", len(candidates)))
            table.clear()

    for lineno, line in enumerate(body.splitlines(), start=1):
        stripped = line.rstrip()
        if not stripped.strip():
            flush_prose()
            flush_table()
            continue
        if stripped.startswith("#"):
            if not stripped.startswith("## ") or not stripped[3:].strip():
                raise ParseError(f"malformed heading marker {stripped[:20]!r}", line=lineno)
            flush_prose()
            flush_table()
            candidates.append(BlockCandidate(stripped[3:].strip(), "heading", len(candidates)))
        elif stripped.startswith("| "):
            flush_prose()
            table.append(stripped)
        elif stripped.startswith("- "):
            flush_prose()
            flush_table()
            candidates.append(BlockCandidate(stripped[2:].strip(), "bullet", len(candidates)))
        else:
            flush_table()
            prose.append(stripped.strip())
    flush_prose()
    flush_table()
    return candidates


def classify_blocks(candidates: Iterable[BlockCandidate]) -> list[Block]:
    """Assign exactly one kind per candidate; pure function of the hints.

    Precedence: explicit marker > table marker > short title-case heuristic
    > BODY.  Prose with no alphanumeric tokens maps to UNKNOWN.
    """
    blocks: list[Block] = []
    for cand in candidates:
        blocks.append(Block(_classify_one(cand), cand.text, cand.order))
    return blocks


def _classify_one(cand: BlockCandidate) -> str:
    if cand.marker == "heading":
        return HEADING
    if cand.marker == "table":
        return TABLE
    if cand.marker == "bullet":
        return BODY
    tokens = tokenize(cand.text)
    if not tokens:
        return UNKNOWN
    if (
        len(tokens) <= _HEADING_MAX_TOKENS
        and not cand.text.rstrip().endswith((".", "!", "?"))
        and (cand.text.istitle() or cand.text.isupper())
    ):
        return HEADING
    return BODY


def parse_document(raw: RawDocument) -> list[Block]:
    """Parse the raw body into ordered, classified blocks."""
    return classify_blocks(scan_body(raw.body))


def blocks_to_body(blocks: Iterable[Block]) -> str:
    """Serialize blocks back to marker text; block texts round-trip in order."""
    lines: list[str] = []
    for block in blocks:
        if block.kind == HEADING:
            lines.append(f"## {block.text}")
        elif block.kind == TABLE:
            lines.append(block.text)
        else:
            lines.append(block.text)
        lines.append("")
    return "\n".join(lines).rstrip("\n") + ("\n" if lines else "")


def paragraph_id(liaison_id: str, body_index: int) -> str:
    return f"{liaison_id}:p{body_index:04d}"


def build_paragraphs(doc: RawDocument, blocks: Iterable[Block]) -> list[Paragraph]:
    """One Paragraph per BODY block, carrying its nearest preceding heading."""
    paragraphs: list[Paragraph] = []
    heading = ""
    body_index = 0
    for block in blocks:
        if block.kind == HEADING:
            heading = block.text
        elif block.kind == BODY:
            spans = tuple(sentence_spans(block.text))
            paragraphs.append(
                Paragraph(
                    paragraph_id=paragraph_id(doc.liaison_id, body_index),
                    liaison_ref=doc.liaison_id,
                    heading_context=heading,
                    text=block.text,
                    word_count=len(tokenize(block.text)),
                    sentence_spans=spans,
                )
            )
            body_index += 1
    return paragraphs


# --- JSON Lines corpus format ------------------------------------------------

def document_to_dict(doc: RawDocument) -> dict:
    return {
        "liaison_id": doc.liaison_id,
        "meeting_date": doc.meeting_date.isoformat(),
        "firm_id": doc.firm_id,
        "industry_code": doc.industry_code,
        "region": doc.region,
        "headcount_bucket": doc.headcount_bucket,
        "staff_scores": doc.staff_scores,
        "body": doc.body,
    }


def document_from_dict(obj: dict) -> RawDocument:
    try:
        doc = RawDocument(
            liaison_id=obj["liaison_id"],
            meeting_date=dt.date.fromisoformat(obj["meeting_date"]),
            firm_id=obj["firm_id"],
            industry_code=obj["industry_code"],
            region=obj["region"],
            headcount_bucket=obj["headcount_bucket"],
            staff_scores={k: int(v) for k, v in (obj.get("staff_scores") or {}).items()},
            body=obj["body"],
        )
    except (KeyError, ValueError) as exc:
        raise ValidationError(f"bad document record: {exc}") from exc
    doc.validate()
    return doc


def write_documents_jsonl(docs: Iterable[RawDocument], path: str | Path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for doc in docs:
            fh.write(json.dumps(document_to_dict(doc), ensure_ascii=False) + "\n")


def read_documents_jsonl(path: str | Path) -> Iterator[RawDocument]:
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as exc:
                raise ParseError(f"bad JSON: {exc}", line=lineno) from exc
            yield document_from_dict(obj)


def load_corpus(path: str | Path) -> list[RawDocument]:
    """Read a JSONL corpus, enforcing liaison_id uniqueness."""
    docs: list[RawDocument] = []
    seen: set[str] = set()
    for doc in read_documents_jsonl(path):
        if doc.liaison_id in seen:
            raise ValidationError(f"duplicate liaison_id {doc.liaison_id}")
        seen.add(doc.liaison_id)
        docs.append(doc)
    return docs
