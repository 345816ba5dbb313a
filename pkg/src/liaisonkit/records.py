"""Enriched liaison records: the unit stored and queried by the index."""

from __future__ import annotations

import datetime as dt
from dataclasses import dataclass, field

from .errors import ValidationError
from .ingest.parser import Paragraph, RawDocument
from .numex import RateSpan, SignedRate


@dataclass(frozen=True)
class Enrichment:
    """Per-paragraph NLP tags attached at ingest time."""

    topic_scores: dict[str, float] = field(default_factory=dict)
    tone: float | None = None
    rates: dict[str, tuple[SignedRate, ...]] = field(default_factory=dict)  # by variable


@dataclass(frozen=True)
class LiaisonRecord:
    liaison_id: str
    meeting_date: dt.date
    firm_id: str
    industry_code: str
    region: str
    headcount_bucket: str
    staff_scores: dict[str, int]
    paragraphs: tuple[Paragraph, ...]
    enrichment: dict[str, Enrichment] = field(default_factory=dict)

    @classmethod
    def from_document(
        cls,
        doc: RawDocument,
        paragraphs: list[Paragraph],
        enrichment: dict[str, Enrichment] | None = None,
    ) -> "LiaisonRecord":
        return cls(
            liaison_id=doc.liaison_id,
            meeting_date=doc.meeting_date,
            firm_id=doc.firm_id,
            industry_code=doc.industry_code,
            region=doc.region,
            headcount_bucket=doc.headcount_bucket,
            staff_scores=dict(doc.staff_scores),
            paragraphs=tuple(paragraphs),
            enrichment=enrichment or {},
        )

    def enrichment_for(self, paragraph_id: str) -> Enrichment:
        return self.enrichment.get(paragraph_id, Enrichment())

    def validate(self) -> None:
        seen: set[str] = set()
        for para in self.paragraphs:
            if para.liaison_ref != self.liaison_id:
                raise ValidationError(
                    f"{self.liaison_id}: paragraph {para.paragraph_id} references {para.liaison_ref}"
                )
            if para.paragraph_id in seen:
                raise ValidationError(f"duplicate paragraph_id {para.paragraph_id}")
            seen.add(para.paragraph_id)
        for name, score in self.staff_scores.items():
            if not -5 <= score <= 5:
                raise ValidationError(f"{self.liaison_id}: staff score {name}={score} outside [-5, 5]")


# --- serialization -----------------------------------------------------------

def record_to_dict(rec: LiaisonRecord) -> dict:
    return {
        "liaison_id": rec.liaison_id,
        "meeting_date": rec.meeting_date.isoformat(),
        "firm_id": rec.firm_id,
        "industry_code": rec.industry_code,
        "region": rec.region,
        "headcount_bucket": rec.headcount_bucket,
        "staff_scores": rec.staff_scores,
        "paragraphs": [
            {
                "paragraph_id": p.paragraph_id,
                "heading_context": p.heading_context,
                "text": p.text,
                "word_count": p.word_count,
                "sentence_spans": [list(s) for s in p.sentence_spans],
            }
            for p in rec.paragraphs
        ],
        "enrichment": {
            pid: {
                "topic_scores": e.topic_scores,
                "tone": e.tone,
                "rates": {
                    variable: [
                        {
                            "sentence_idx": r.span.sentence_ref[1],
                            "raw": r.span.raw_text,
                            "low": r.span.low,
                            "high": r.span.high,
                            "qualifier": r.span.qualifier,
                            "char_span": list(r.span.char_span),
                            "sign": r.sign,
                        }
                        for r in rates
                    ]
                    for variable, rates in e.rates.items()
                },
            }
            for pid, e in rec.enrichment.items()
        },
    }


def record_from_dict(obj: dict) -> LiaisonRecord:
    liaison_id = obj["liaison_id"]
    paragraphs = tuple(
        Paragraph(
            paragraph_id=p["paragraph_id"],
            liaison_ref=liaison_id,
            heading_context=p.get("heading_context", ""),
            text=p["text"],
            word_count=int(p["word_count"]),
            sentence_spans=tuple(tuple(s) for s in p.get("sentence_spans", [])),
        )
        for p in obj.get("paragraphs", [])
    )
    enrichment: dict[str, Enrichment] = {}
    for pid, e in (obj.get("enrichment") or {}).items():
        by_variable: dict[str, tuple[SignedRate, ...]] = {}
        for variable, rate_rows in (e.get("rates") or {}).items():
            rates = []
            for r in rate_rows:
                span = RateSpan(
                    sentence_ref=(pid, int(r["sentence_idx"])),
                    raw_text=r["raw"],
                    low=float(r["low"]),
                    high=float(r["high"]),
                    point=(float(r["low"]) + float(r["high"])) / 2.0,
                    qualifier=r.get("qualifier", "exact"),
                    char_span=tuple(r.get("char_span", (0, 0))),
                )
                sign = int(r["sign"])
                rates.append(SignedRate(span=span, sign=sign, value=sign * span.point))
            by_variable[variable] = tuple(rates)
        enrichment[pid] = Enrichment(
            topic_scores={k: float(v) for k, v in (e.get("topic_scores") or {}).items()},
            tone=None if e.get("tone") is None else float(e["tone"]),
            rates=by_variable,
        )
    rec = LiaisonRecord(
        liaison_id=liaison_id,
        meeting_date=dt.date.fromisoformat(obj["meeting_date"]),
        firm_id=obj["firm_id"],
        industry_code=obj["industry_code"],
        region=obj["region"],
        headcount_bucket=obj["headcount_bucket"],
        staff_scores={k: int(v) for k, v in (obj.get("staff_scores") or {}).items()},
        paragraphs=paragraphs,
        enrichment=enrichment,
    )
    rec.validate()
    return rec
