"""Aggregate indicator series: topic exposure, topic tone, uncertainty.

Exposure of one liaison is the share of its snippets (or words, for the
dictionary route) on a topic; period aggregates either weight each liaison
equally ("per_liaison") or pool counts across liaisons ("pooled").
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from . import classify
from .classify import SentimentLexicon, TopicDictionary
from .errors import EmptySeriesError, MissingScoreError, ValidationError
from .henderson import henderson_trend
from .records import LiaisonRecord
from .store.engine import Snapshot
from .text import tokenize

WEIGHTINGS = ("per_liaison", "pooled")


@dataclass(frozen=True)
class SeriesPoint:
    period: str
    value: float
    n_liaisons: int


@dataclass
class IndicatorSeries:
    name: str
    granularity: str
    points: list[SeriesPoint]
    standardized: bool = False

    def values(self) -> np.ndarray:
        return np.array([p.value for p in self.points], dtype=float)

    def periods(self) -> list[str]:
        return [p.period for p in self.points]

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "granularity": self.granularity,
            "standardized": self.standardized,
            "points": [
                {"period": p.period, "value": p.value, "n_liaisons": p.n_liaisons}
                for p in self.points
            ],
        }

    def to_csv(self) -> str:
        lines = ["period,value,n_liaisons"]
        for p in self.points:
            lines.append(f"{p.period},{p.value:.10g},{p.n_liaisons}")
        return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class ScoredMethod:
    """Snippet = paragraph; topical when its topic probability clears the threshold."""

    threshold: float = classify.DEFAULT_THRESHOLD

    label = "scored"


@dataclass(frozen=True)
class DictionaryMethod:
    """Keyword route: exposure counts dictionary hits as a share of words."""

    dictionary: TopicDictionary
    lexicon: SentimentLexicon | None = None

    label = "dictionary"


Method = ScoredMethod | DictionaryMethod


def _exposure_parts(record: LiaisonRecord, topic: str, method: Method) -> tuple[float, float]:
    """(numerator, denominator) of the liaison's exposure ratio."""
    if not record.paragraphs:
        raise EmptySeriesError(f"liaison {record.liaison_id} has no paragraphs")
    if isinstance(method, ScoredMethod):
        hits = 0
        for para in record.paragraphs:
            scores = record.enrichment_for(para.paragraph_id).topic_scores
            if topic not in scores:
                raise MissingScoreError(f"{para.paragraph_id} has no score for {topic!r}")
            if scores[topic] > method.threshold:
                hits += 1
        return float(hits), float(len(record.paragraphs))
    total_words = sum(p.word_count for p in record.paragraphs)
    if total_words == 0:
        raise EmptySeriesError(f"liaison {record.liaison_id} has no tokens")
    hits = sum(classify.dictionary_match_count(p, method.dictionary) for p in record.paragraphs)
    return float(hits), float(total_words)


def liaison_topic_exposure(record: LiaisonRecord, topic: str, method: Method) -> float:
    num, den = _exposure_parts(record, topic, method)
    return num / den


def _topical_tones(record: LiaisonRecord, topic: str, method: Method) -> list[float]:
    """Tones of the liaison's topical snippets (may be empty)."""
    tones: list[float] = []
    if isinstance(method, ScoredMethod):
        for para in record.paragraphs:
            enr = record.enrichment_for(para.paragraph_id)
            if topic not in enr.topic_scores:
                raise MissingScoreError(f"{para.paragraph_id} has no score for {topic!r}")
            if enr.topic_scores[topic] > method.threshold:
                if enr.tone is None:
                    raise MissingScoreError(f"{para.paragraph_id} has no scored tone")
                tones.append(enr.tone)
    else:
        if method.lexicon is None:
            raise ValidationError("dictionary tone needs a sentiment lexicon")
        for para in record.paragraphs:
            if classify.dictionary_match_count(para, method.dictionary) > 0:
                tones.append(classify.dictionary_tone([para], method.lexicon).value)
    return tones


def average_topic_exposure(
    records: Sequence[LiaisonRecord], topic: str, method: Method, weighting: str = "per_liaison"
) -> tuple[float, int]:
    """Period aggregate over the liaisons; returns (value, N_t)."""
    if not records:
        raise EmptySeriesError("no liaisons in period")
    _check_weighting(weighting)
    parts = [_exposure_parts(r, topic, method) for r in records]
    if weighting == "per_liaison":
        return float(np.mean([n / d for n, d in parts])), len(records)
    return sum(n for n, _ in parts) / sum(d for _, d in parts), len(records)


def average_topic_tone(
    records: Sequence[LiaisonRecord], topic: str, method: Method, weighting: str = "per_liaison"
) -> tuple[float, int] | None:
    """Average tone of topical snippets; None when the period has none.

    Liaisons with zero topical snippets are excluded from the per-liaison
    mean rather than counted as zero.
    """
    _check_weighting(weighting)
    per_liaison_tones = [(_topical_tones(r, topic, method)) for r in records]
    contributing = [t for t in per_liaison_tones if t]
    if not contributing:
        return None
    if weighting == "per_liaison":
        return float(np.mean([np.mean(t) for t in contributing])), len(contributing)
    pooled = [tone for tones in contributing for tone in tones]
    return float(np.mean(pooled)), len(contributing)


def _check_weighting(weighting: str) -> None:
    if weighting not in WEIGHTINGS:
        raise ValidationError(f"unknown weighting {weighting!r}")


def topic_exposure_series(
    snapshot: Snapshot,
    topic: str,
    method: Method,
    granularity: str = "quarter",
    weighting: str = "per_liaison",
    standardized: bool = False,
) -> IndicatorSeries:
    points = []
    for period, records in sorted(snapshot.liaisons_by_period(granularity).items()):
        value, n = average_topic_exposure(records, topic, method, weighting)
        points.append(SeriesPoint(period, value, n))
    series = IndicatorSeries(
        name=f"{topic} exposure ({method.label}, {weighting})",
        granularity=granularity,
        points=points,
    )
    return standardize(series) if standardized else series


def topic_tone_series(
    snapshot: Snapshot,
    topic: str,
    method: Method,
    granularity: str = "quarter",
    weighting: str = "per_liaison",
    standardized: bool = False,
) -> IndicatorSeries:
    points = []
    for period, records in sorted(snapshot.liaisons_by_period(granularity).items()):
        result = average_topic_tone(records, topic, method, weighting)
        if result is None:
            continue  # no topical snippets this period
        value, n = result
        points.append(SeriesPoint(period, value, n))
    series = IndicatorSeries(
        name=f"{topic} tone ({method.label}, {weighting})",
        granularity=granularity,
        points=points,
    )
    return standardize(series) if standardized else series


def uncertainty_index(
    snapshot: Snapshot,
    dictionary: TopicDictionary,
    granularity: str = "month",
    weighting: str = "per_liaison",
) -> IndicatorSeries:
    """Standardised dictionary-exposure series built from the uncertainty list."""
    raw = topic_exposure_series(
        snapshot,
        topic="uncertainty",
        method=DictionaryMethod(dictionary),
        granularity=granularity,
        weighting=weighting,
    )
    series = standardize(raw)
    series.name = "uncertainty index"
    return series


def smooth_series(series: IndicatorSeries, term: int = 13) -> IndicatorSeries:
    """Henderson trend of a series, for display; drops the standardized flag."""
    smoothed = henderson_trend(series.values(), term=term)
    return IndicatorSeries(
        name=f"{series.name} ({term}-term trend)",
        granularity=series.granularity,
        points=[
            SeriesPoint(p.period, float(v), p.n_liaisons)
            for p, v in zip(series.points, smoothed)
        ],
        standardized=False,
    )


def standardize_values(values: np.ndarray) -> np.ndarray:
    if values.size < 2:
        raise ValidationError("standardize needs at least 2 points")
    sd = values.std(ddof=1)
    if sd == 0:
        raise ValidationError("standardize: zero variance")
    return (values - values.mean()) / sd


def standardize(series: IndicatorSeries) -> IndicatorSeries:
    """Shift and scale to sample mean 0 and sample sd 1 (n-1 denominator)."""
    z = standardize_values(series.values())
    return IndicatorSeries(
        name=series.name,
        granularity=series.granularity,
        points=[
            SeriesPoint(p.period, float(v), p.n_liaisons) for p, v in zip(series.points, z)
        ],
        standardized=True,
    )


# --- distinctive terms (class-based TF-IDF) -----------------------------------

@dataclass
class DistinctiveTermReport:
    class_label: str
    terms: list[dict]  # {"ngram", "score"} with scores non-increasing


def _ngram_counts(snippets: Iterable[str]) -> tuple[Counter, int]:
    counts: Counter = Counter()
    n_tokens = 0
    for snippet in snippets:
        toks = tokenize(snippet)
        n_tokens += len(toks)
        counts.update(toks)
        counts.update(" ".join(pair) for pair in zip(toks, toks[1:]))
    return counts, n_tokens


def ctfidf_terms(
    class_snippets: Sequence[str],
    background_snippets: Sequence[str],
    top_k: int = 10,
    class_label: str = "class",
) -> DistinctiveTermReport:
    """Terms (unigrams and bigrams) most distinctive of the class.

    score(t) = tf_class(t) * log(1 + A / f_total(t)) with A the average token
    count per class and f_total the term's frequency across both snippet sets.
    """
    if not class_snippets or not background_snippets:
        raise ValidationError("ctfidf_terms needs non-empty class and background")
    tf_class, n_class = _ngram_counts(class_snippets)
    tf_bg, n_bg = _ngram_counts(background_snippets)
    avg_tokens = (n_class + n_bg) / 2.0
    scored = []
    for term, tf in tf_class.items():
        f_total = tf + tf_bg.get(term, 0)
        scored.append((tf * math.log1p(avg_tokens / f_total), term))
    scored.sort(key=lambda s: (-s[0], s[1]))
    return DistinctiveTermReport(
        class_label=class_label,
        terms=[{"ngram": term, "score": score} for score, term in scored[:top_k]],
    )
