"""Enrichment pipeline: raw documents -> scored, extracted liaison records.

Runs before any store commit so a refresh can swap in fully-enriched
paragraphs atomically.
"""

from __future__ import annotations

from typing import Iterable, Sequence

import numpy as np

from .classify import ScoreProvider
from .ingest.parser import RawDocument, build_paragraphs, parse_document
from .numex import LiaisonRateObs, SignProvider, extract_signed_rates
from .records import Enrichment, LiaisonRecord

DEFAULT_VARIABLES = ("wages", "prices")


def enrich_documents(
    docs: Iterable[RawDocument],
    provider: ScoreProvider | None = None,
    signer: SignProvider | None = None,
    variables: Sequence[str] = DEFAULT_VARIABLES,
) -> list[LiaisonRecord]:
    """Parse, score and extract each document; deterministic liaison order."""
    records = []
    for doc in sorted(docs, key=lambda d: d.liaison_id):
        doc.validate()
        paragraphs = build_paragraphs(doc, parse_document(doc))
        enrichment: dict[str, Enrichment] = {}
        rates_by_pid: dict[str, dict[str, tuple]] = {p.paragraph_id: {} for p in paragraphs}
        for variable in variables:
            for rate in extract_signed_rates(paragraphs, variable, signer):
                pid = rate.span.sentence_ref[0]
                bucket = rates_by_pid[pid].setdefault(variable, ())
                rates_by_pid[pid][variable] = bucket + (rate,)
        for para in paragraphs:
            scores = provider.scores_for(para.paragraph_id) if provider else {}
            tone = provider.tone_for(para.paragraph_id) if provider else None
            enrichment[para.paragraph_id] = Enrichment(
                topic_scores=scores,
                tone=tone,
                rates=rates_by_pid[para.paragraph_id],
            )
        records.append(LiaisonRecord.from_document(doc, paragraphs, enrichment))
    return records


def liaison_rate_observations(
    records: Iterable[LiaisonRecord], variable: str
) -> list[LiaisonRateObs]:
    """Document-level mean rates, skipping liaisons with no extractions."""
    out = []
    for rec in sorted(records, key=lambda r: (r.meeting_date, r.liaison_id)):
        values = [
            r.value
            for enr in rec.enrichment.values()
            for r in enr.rates.get(variable, ())
        ]
        if values:
            out.append(LiaisonRateObs(rec.liaison_id, rec.meeting_date, float(np.mean(values))))
    return out


def staff_score_observations(records: Iterable[LiaisonRecord], name: str) -> list[LiaisonRateObs]:
    """Staff-score values shaped like rate observations for aggregation."""
    out = []
    for rec in sorted(records, key=lambda r: (r.meeting_date, r.liaison_id)):
        if name in rec.staff_scores:
            out.append(LiaisonRateObs(rec.liaison_id, rec.meeting_date, float(rec.staff_scores[name])))
    return out
