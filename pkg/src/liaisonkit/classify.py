"""Topic and tone assignment: keyword dictionaries and pluggable score providers.

Model inference stays outside the package; probabilistic topic scores and
scored tone arrive through a ScoreProvider (sidecar file lookup, or a
deterministic stub that replays planted truth labels with seeded jitter).
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Mapping, Protocol, Sequence

from .errors import (
    MissingScoreError,
    UndefinedToneError,
    UnknownTopicError,
    ValidationError,
)
from .ingest.parser import Paragraph
from .ingest.synth import TruthRecord
from .text import tokenize

DEFAULT_TOPICS: tuple[str, ...] = (
    "demand",
    "sales",
    "investment or capex",
    "property or housing",
    "employment",
    "wages",
    "prices",
    "margins",
    "costs",
    "labour costs",
    "non-labour costs",
    "supply chains",
    "financing conditions",
    "climate change",
)

DEFAULT_THRESHOLD = 0.9


@dataclass(frozen=True)
class TopicDictionary:
    name: str
    terms: frozenset[str]  # normalized tokens and multi-word phrases

    def __post_init__(self):
        if not self.terms:
            raise ValidationError(f"dictionary {self.name!r} is empty")

    @classmethod
    def from_terms(cls, name: str, terms: Iterable[str]) -> "TopicDictionary":
        normalized = {" ".join(tokenize(t)) for t in terms}
        normalized.discard("")
        return cls(name=name, terms=frozenset(normalized))

    @classmethod
    def from_file(cls, path: str | Path) -> "TopicDictionary":
        """UTF-8 file, one term or phrase per line, '#' comments."""
        terms = []
        with open(path, encoding="utf-8") as fh:
            for line in fh:
                line = line.split("#", 1)[0].strip()
                if line:
                    terms.append(line)
        return cls.from_terms(Path(path).stem, terms)

    def to_text(self) -> str:
        return "\n".join(sorted(self.terms)) + "\n"


def load_dictionary_dir(path: str | Path) -> dict[str, TopicDictionary]:
    out = {}
    for file in sorted(Path(path).glob("*.txt")):
        d = TopicDictionary.from_file(file)
        out[d.name] = d
    return out


@dataclass(frozen=True)
class SentimentLexicon:
    positive: frozenset[str]
    negative: frozenset[str]

    def __post_init__(self):
        overlap = self.positive & self.negative
        if overlap:
            raise ValidationError(f"lexicon polarity overlap: {sorted(overlap)[:5]}")

    @classmethod
    def from_files(cls, positive_path: str | Path, negative_path: str | Path) -> "SentimentLexicon":
        pos = TopicDictionary.from_file(positive_path).terms
        neg = TopicDictionary.from_file(negative_path).terms
        return cls(positive=frozenset(pos), negative=frozenset(neg))


@dataclass(frozen=True)
class TopicScoreVector:
    paragraph_ref: str
    scores: dict[str, float]


@dataclass(frozen=True)
class ToneValue:
    value: float
    method: str  # "dictionary" | "scored"


class ScoreProvider(Protocol):
    labels: tuple[str, ...]

    def scores_for(self, paragraph_id: str) -> dict[str, float]: ...

    def tone_for(self, paragraph_id: str) -> float | None: ...


class SidecarScoreProvider:
    """Scores read from a JSON Lines sidecar {paragraph_id, scores, tone}."""

    def __init__(self, rows: Mapping[str, dict], labels: Sequence[str] = DEFAULT_TOPICS):
        self.labels = tuple(labels)
        self._rows = dict(rows)

    @classmethod
    def from_jsonl(cls, path: str | Path, labels: Sequence[str] = DEFAULT_TOPICS) -> "SidecarScoreProvider":
        rows = {}
        with open(path, encoding="utf-8") as fh:
            for line in fh:
                if not line.strip():
                    continue
                obj = json.loads(line)
                rows[obj["paragraph_id"]] = obj
        return cls(rows, labels)

    def scores_for(self, paragraph_id: str) -> dict[str, float]:
        try:
            row = self._rows[paragraph_id]
        except KeyError:
            raise MissingScoreError(f"no sidecar scores for {paragraph_id}") from None
        scores = row.get("scores") or {}
        out = {}
        for label in self.labels:
            if label not in scores:
                raise MissingScoreError(f"{paragraph_id}: sidecar lacks label {label!r}")
            out[label] = float(scores[label])
        return out

    def tone_for(self, paragraph_id: str) -> float | None:
        try:
            row = self._rows[paragraph_id]
        except KeyError:
            raise MissingScoreError(f"no sidecar tone for {paragraph_id}") from None
        tone = row.get("tone")
        return None if tone is None else float(tone)


class StubScoreProvider:
    """Deterministic stand-in for model inference on synthetic corpora.

    Planted truth topics score 0.95 and all other labels 0.05, plus seeded
    jitter in [-0.04, +0.04] derived from (seed, paragraph_id, label) so the
    same seed always reproduces the same vector.  Tone replays the planted
    tone from the truth sidecar.
    """

    def __init__(self, truth: Mapping[str, TruthRecord], labels: Sequence[str], seed: int = 0,
                 jitter: float = 0.04):
        self.labels = tuple(labels)
        self._truth = truth
        self._seed = seed
        self._jitter = jitter

    def _jitter_for(self, paragraph_id: str, label: str) -> float:
        digest = hashlib.sha256(f"{self._seed}|{paragraph_id}|{label}".encode()).digest()
        unit = int.from_bytes(digest[:8], "big") / 2**64
        return (2.0 * unit - 1.0) * self._jitter

    def scores_for(self, paragraph_id: str) -> dict[str, float]:
        try:
            truth = self._truth[paragraph_id]
        except KeyError:
            raise MissingScoreError(f"no truth record for {paragraph_id}") from None
        out = {}
        for label in self.labels:
            base = 0.95 if label in truth.topics else 0.05
            out[label] = min(1.0, max(0.0, base + self._jitter_for(paragraph_id, label)))
        return out

    def tone_for(self, paragraph_id: str) -> float | None:
        try:
            return self._truth[paragraph_id].planted_tone
        except KeyError:
            raise MissingScoreError(f"no truth record for {paragraph_id}") from None


def score_topics(paragraph: Paragraph, provider: ScoreProvider) -> TopicScoreVector:
    """One probability per configured label, in [0, 1] each, no sum constraint."""
    return TopicScoreVector(
        paragraph_ref=paragraph.paragraph_id,
        scores=provider.scores_for(paragraph.paragraph_id),
    )


def threshold_filter(scores: TopicScoreVector, topic: str, threshold: float) -> bool:
    """Strictly greater-than threshold rule."""
    if not 0.0 < threshold < 1.0:
        raise ValidationError(f"threshold {threshold} outside (0, 1)")
    if topic not in scores.scores:
        raise UnknownTopicError(f"unknown topic label {topic!r}")
    return scores.scores[topic] > threshold


def count_topic_snippets(
    scored_paragraphs: Iterable[TopicScoreVector], topic: str, threshold: float
) -> int:
    """Number of paragraphs whose topic probability clears the threshold."""
    return sum(1 for vec in scored_paragraphs if threshold_filter(vec, topic, threshold))


def dictionary_match_count(paragraph: Paragraph, dictionary: TopicDictionary) -> int:
    """Token hits (with repetitions) plus one count per phrase occurrence."""
    return _match_count_tokens(tokenize(paragraph.text), dictionary)


def _match_count_tokens(tokens: Sequence[str], dictionary: TopicDictionary) -> int:
    single = {t for t in dictionary.terms if " " not in t}
    phrases = [tuple(t.split(" ")) for t in dictionary.terms if " " in t]
    count = sum(1 for tok in tokens if tok in single)
    for phrase in phrases:
        k = len(phrase)
        count += sum(1 for i in range(len(tokens) - k + 1) if tuple(tokens[i : i + k]) == phrase)
    return count


def dictionary_tone(paragraphs: Sequence[Paragraph], lexicon: SentimentLexicon) -> ToneValue:
    """Net balance of polarity words as a share of total words, in [-1, 1]."""
    if not paragraphs:
        raise ValidationError("dictionary_tone needs at least one paragraph")
    total = sum(p.word_count for p in paragraphs)
    if total == 0:
        raise UndefinedToneError("zero total word count")
    pos = neg = 0
    for p in paragraphs:
        toks = tokenize(p.text)
        pos += sum(1 for t in toks if t in lexicon.positive)
        neg += sum(1 for t in toks if t in lexicon.negative)
    value = (pos - neg) / total
    return ToneValue(value=max(-1.0, min(1.0, value)), method="dictionary")


def sentence_tones(paragraph: Paragraph, lexicon: SentimentLexicon) -> list[ToneValue]:
    """Dictionary tone per sentence span (snippet = sentence mode)."""
    out = []
    for a, b in paragraph.sentence_spans:
        chunk = paragraph.text[a:b]
        toks = tokenize(chunk)
        if not toks:
            continue
        pos = sum(1 for t in toks if t in lexicon.positive)
        neg = sum(1 for t in toks if t in lexicon.negative)
        value = (pos - neg) / len(toks)
        out.append(ToneValue(value=max(-1.0, min(1.0, value)), method="dictionary"))
    return out
