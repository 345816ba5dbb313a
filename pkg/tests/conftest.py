"""Shared fixtures and independent oracles."""

from __future__ import annotations

import datetime as dt

import pytest

from liaisonkit.ingest import CorpusConfig, generate_synthetic_corpus
from liaisonkit.ingest.parser import Paragraph, RawDocument, build_paragraphs, parse_document
from liaisonkit.classify import StubScoreProvider
from liaisonkit.pipeline import enrich_documents
from liaisonkit.records import Enrichment, LiaisonRecord
from liaisonkit.store import ParagraphStore
from liaisonkit.store.filters import AllOf, AnyOf, Filter, Term
from liaisonkit.text import tokenize


def make_record(
    liaison_id: str,
    date: dt.date,
    texts: list[str],
    industry: str = "4100",
    region: str = "NSW",
    firm: str = "F0001",
    staff_scores: dict | None = None,
    topic_scores: dict[str, dict[str, float]] | None = None,
    tones: dict[str, float] | None = None,
) -> LiaisonRecord:
    """Hand-built record; paragraph ids are '<liaison>:p<i>'."""
    doc = RawDocument(
        liaison_id=liaison_id,
        meeting_date=date,
        firm_id=firm,
        industry_code=industry,
        region=region,
        headcount_bucket="medium",
        staff_scores=staff_scores or {},
        body="\n\n".join(texts) + "\n",
    )
    paragraphs = build_paragraphs(doc, parse_document(doc))
    enrichment = {}
    for para in paragraphs:
        scores = (topic_scores or {}).get(para.paragraph_id, {})
        tone = (tones or {}).get(para.paragraph_id)
        enrichment[para.paragraph_id] = Enrichment(topic_scores=scores, tone=tone)
    return LiaisonRecord.from_document(doc, paragraphs, enrichment)


# --- independent linear-scan filter oracle ------------------------------------

def _clause_holds(clause, tokens: list[str]) -> bool:
    if isinstance(clause, Term):
        k = len(clause.phrase)
        for i in range(len(tokens) - k + 1):
            if tuple(tokens[i : i + k]) == clause.phrase:
                return True
        return False
    if isinstance(clause, AnyOf):
        return any(_clause_holds(c, tokens) for c in clause.items)
    if isinstance(clause, AllOf):
        return all(_clause_holds(c, tokens) for c in clause.items)
    raise TypeError(clause)


def scan_oracle(records: list[LiaisonRecord], flt: Filter) -> list[str]:
    """Brute-force predicate over every paragraph; returns paragraph ids in
    (meeting_date, liaison_id, order) order."""
    hits: list[tuple] = []
    for rec in records:
        for order, para in enumerate(rec.paragraphs):
            if flt.date_range is not None:
                if not flt.date_range[0] <= rec.meeting_date <= flt.date_range[1]:
                    continue
            if flt.regions and rec.region not in flt.regions:
                continue
            if flt.industries and not any(
                rec.industry_code.startswith(p) for p in flt.industries
            ):
                continue
            if flt.keyword_clause is not None:
                if not _clause_holds(flt.keyword_clause, tokenize(para.text)):
                    continue
            enr = rec.enrichment_for(para.paragraph_id)
            if any(
                enr.topic_scores.get(topic, float("-inf")) <= min_p
                for topic, min_p in flt.topic_clause
            ):
                continue
            skip = False
            for name, lo, hi in flt.staff_score_clause:
                score = rec.staff_scores.get(name)
                if score is None or not lo <= score <= hi:
                    skip = True
                    break
            if skip:
                continue
            hits.append((rec.meeting_date, rec.liaison_id, order, para.paragraph_id))
    hits.sort()
    return [pid for _, _, _, pid in hits]


@pytest.fixture(scope="session")
def small_corpus():
    cfg = CorpusConfig(firms=8, quarters=6, uncertainty_quarter="2018Q4")
    docs, truths = generate_synthetic_corpus(cfg, seed=11)
    return cfg, docs, truths


@pytest.fixture(scope="session")
def small_records(small_corpus):
    cfg, docs, truths = small_corpus
    provider = StubScoreProvider({t.paragraph_id: t for t in truths}, labels=cfg.topics, seed=3)
    return enrich_documents(docs, provider)


@pytest.fixture(scope="session")
def small_store(small_records):
    store = ParagraphStore()
    store.upsert_many(small_records)
    return store
