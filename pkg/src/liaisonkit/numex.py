"""Extraction of signed numeric growth rates (prices, wages) from prose.

Four stages: candidate paragraph selection, rate-span parsing via a
deterministic grammar, sign inference from direction cues, and per-period
aggregation with per-calendar-year percentile trimming.
"""

from __future__ import annotations

import datetime as dt
import json
import logging
import re
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Mapping, Protocol, Sequence

import numpy as np

from .errors import UnsignedSpanError, ValidationError
from .ingest.parser import Paragraph
from .periods import period_key
from .text import tokenize_with_spans

log = logging.getLogger(__name__)

ANCHORS: dict[str, frozenset[str]] = {
    "prices": frozenset({"price", "prices"}),
    "wages": frozenset({"wage", "wages", "salary", "salaries"}),
}

DEFAULT_TRIM = (10.0, 90.0)

_FRACTIONS = {"½": 0.5, "¼": 0.25, "¾": 0.75}
_NUM = r"(?:\d+(?:\.\d+)?[½¼¾]?|[½¼¾])"
_PCT = r"(?:per\s?cent|percent|%)"
_RATE_RE = re.compile(
    rf"(?:(?P<approx>around|about|circa|approximately|roughly)\s+)?"
    rf"(?P<a>{_NUM})(?:(?:\s*[-–—]\s*|\s+to\s+)(?P<b>{_NUM}))?\s*{_PCT}",
    re.IGNORECASE,
)

_UP_CUES = frozenset(
    "rose rise risen rising rises increase increased increases increasing lifted lift "
    "lifts lifting up grew grow grows growing grown higher gained gains jumped climbed "
    "accelerated strengthened".split()
)
_DOWN_CUES = frozenset(
    "fell fall fallen falling falls decline declined declines declining decrease "
    "decreased decreases decreasing cut cuts down lower lowered dropped drop drops "
    "eased reduced weakened".split()
)
_ZERO_CUES = frozenset("unchanged flat steady stable held maintained same".split())
_NEGATORS = frozenset({"not", "never", "no"})


@dataclass(frozen=True)
class RateSpan:
    sentence_ref: tuple[str, int]
    raw_text: str
    low: float
    high: float
    point: float
    qualifier: str  # "exact" | "range" | "approx"
    char_span: tuple[int, int]


@dataclass(frozen=True)
class SignedRate:
    span: RateSpan
    sign: int
    value: float


def _parse_number(token: str) -> float:
    if token[-1] in _FRACTIONS:
        base = float(token[:-1]) if len(token) > 1 else 0.0
        return base + _FRACTIONS[token[-1]]
    return float(token)


def parse_rate_spans(sentence: str, sentence_ref: tuple[str, int] = ("", 0)) -> list[RateSpan]:
    """All rate expressions in the sentence, in order of appearance.

    Recognised: ``X per cent``, ``X-Y per cent``, ``X to Y per cent``,
    ``around X per cent`` (approx), decimals and vulgar fractions like 2½.
    """
    spans: list[RateSpan] = []
    for m in _RATE_RE.finditer(sentence):
        low = _parse_number(m.group("a"))
        b = m.group("b")
        if b is not None:
            high = _parse_number(b)
            if high < low:
                low, high = high, low
            qualifier = "range"
        else:
            high = low
            qualifier = "approx" if m.group("approx") else "exact"
        spans.append(
            RateSpan(
                sentence_ref=sentence_ref,
                raw_text=m.group(0),
                low=low,
                high=high,
                point=(low + high) / 2.0,
                qualifier=qualifier,
                char_span=(m.start(), m.end()),
            )
        )
    return spans


def _has_numeral(tokens: Sequence[str]) -> bool:
    return any(any(ch.isdigit() or ch in _FRACTIONS for ch in tok) for tok in tokens)


def select_candidates(paragraphs: Iterable[Paragraph], anchor: str) -> list[Paragraph]:
    """Paragraphs mentioning the anchor variable, a numeral and "per cent"."""
    try:
        anchor_tokens = ANCHORS[anchor]
    except KeyError:
        raise ValidationError(f"unknown extraction variable {anchor!r}") from None
    out = []
    for para in paragraphs:
        tokens = [t.token for t in tokenize_with_spans(para.text)]
        if (
            any(t in anchor_tokens for t in tokens)
            and _has_numeral(tokens)
            and "percent" in tokens
        ):
            out.append(para)
    return out


class SignProvider(Protocol):
    def sign_for(self, sentence: str, span: RateSpan) -> int: ...


class RuleBasedSigner:
    """Direction-cue lexicon signer; nearest cue to the span wins.

    Explicit negation within three tokens before the cue flips it to 0.
    No cue, or an up/down tie at equal distance, raises UnsignedSpanError.
    """

    def sign_for(self, sentence: str, span: RateSpan) -> int:
        toks = tokenize_with_spans(sentence)
        if not toks:
            raise UnsignedSpanError("empty sentence")
        span_idx = 0
        for i, t in enumerate(toks):
            if t.end > span.char_span[0]:
                span_idx = i
                break
        cues: list[tuple[int, int, int]] = []  # (distance, token index, sign)
        for i, t in enumerate(toks):
            if t.token in _UP_CUES:
                sign = 1
            elif t.token in _DOWN_CUES:
                sign = -1
            elif t.token in _ZERO_CUES:
                sign = 0
            else:
                continue
            if any(toks[j].token in _NEGATORS for j in range(max(0, i - 3), i)):
                sign = 0
            cues.append((abs(i - span_idx), i, sign))
        if not cues:
            raise UnsignedSpanError(f"no direction cue in {sentence!r}")
        cues.sort()
        best = cues[0]
        contenders = {sign for dist, _, sign in cues if dist == best[0]}
        if len(contenders) > 1:
            raise UnsignedSpanError(f"tied direction cues in {sentence!r}")
        return best[2]


class SidecarSigner:
    """Signs looked up from an external label file keyed by sentence."""

    def __init__(self, signs: Mapping[tuple[str, int], int]):
        self._signs = dict(signs)

    @classmethod
    def from_jsonl(cls, path: str | Path) -> "SidecarSigner":
        signs: dict[tuple[str, int], int] = {}
        with open(path, encoding="utf-8") as fh:
            for line in fh:
                if not line.strip():
                    continue
                obj = json.loads(line)
                signs[(obj["paragraph_id"], int(obj["sentence_idx"]))] = int(obj["sign"])
        return cls(signs)

    def sign_for(self, sentence: str, span: RateSpan) -> int:
        try:
            return self._signs[span.sentence_ref]
        except KeyError:
            raise UnsignedSpanError(f"no sidecar sign for {span.sentence_ref}") from None


def extract_signed_rates(
    paragraphs: Iterable[Paragraph],
    variable: str,
    signer: SignProvider | None = None,
) -> list[SignedRate]:
    """Full per-paragraph pipeline; unsignable spans are dropped and logged."""
    signer = signer or RuleBasedSigner()
    rates: list[SignedRate] = []
    for para in select_candidates(paragraphs, variable):
        for sent_idx, (a, b) in enumerate(para.sentence_spans):
            sentence = para.text[a:b]
            for span in parse_rate_spans(sentence, (para.paragraph_id, sent_idx)):
                try:
                    sign = signer.sign_for(sentence, span)
                except UnsignedSpanError as exc:
                    log.info("dropped span %r: %s", span.raw_text, exc)
                    continue
                rates.append(SignedRate(span=span, sign=sign, value=sign * span.point))
    return rates


def liaison_rate(
    paragraphs: Sequence[Paragraph],
    variable: str,
    signer: SignProvider | None = None,
) -> float | None:
    """Mean signed rate across the document, or None when nothing extracts."""
    rates = extract_signed_rates(paragraphs, variable, signer)
    if not rates:
        return None
    return float(np.mean([r.value for r in rates]))


@dataclass(frozen=True)
class LiaisonRateObs:
    liaison_id: str
    date: dt.date
    value: float


@dataclass
class ExtractionSeries:
    variable: str
    points: list[dict]  # {"period", "mean", "n_firms"}
    trim: tuple[float, float]

    def to_csv(self) -> str:
        lines = ["period,mean,n_firms"]
        for p in self.points:
            lines.append(f"{p['period']},{p['mean']:.6g},{p['n_firms']}")
        return "\n".join(lines) + "\n"


def trim_by_year(
    observations: Sequence[LiaisonRateObs], trim: tuple[float, float] = DEFAULT_TRIM
) -> list[LiaisonRateObs]:
    """Drop rates strictly outside the year's [lower, upper] percentiles.

    Percentiles use linear interpolation between order statistics, so a year
    of identical rates trims nothing.
    """
    lower_pct, upper_pct = trim
    by_year: dict[int, list[LiaisonRateObs]] = {}
    for obs in observations:
        by_year.setdefault(obs.date.year, []).append(obs)
    kept: list[LiaisonRateObs] = []
    for year in sorted(by_year):
        values = np.array([o.value for o in by_year[year]], dtype=float)
        lo = np.percentile(values, lower_pct)
        hi = np.percentile(values, upper_pct)
        kept.extend(o for o in by_year[year] if lo <= o.value <= hi)
    return kept


def period_series_trimmed(
    observations: Sequence[LiaisonRateObs],
    variable: str,
    granularity: str = "quarter",
    trim: tuple[float, float] = DEFAULT_TRIM,
) -> ExtractionSeries:
    """Per-period mean of surviving liaison rates after yearly trimming."""
    kept = trim_by_year(observations, trim)
    by_period: dict[str, list[float]] = {}
    for obs in kept:
        by_period.setdefault(period_key(obs.date, granularity), []).append(obs.value)
    points = [
        {"period": period, "mean": float(np.mean(vals)), "n_firms": len(vals)}
        for period, vals in sorted(by_period.items())
    ]
    return ExtractionSeries(variable=variable, points=points, trim=trim)


def dump_extractions(rates: Iterable[SignedRate], path: str | Path) -> None:
    """JSONL dump, one line per signed extraction."""
    with open(path, "w", encoding="utf-8") as fh:
        for r in rates:
            fh.write(
                json.dumps(
                    {
                        "paragraph_id": r.span.sentence_ref[0],
                        "sentence_idx": r.span.sentence_ref[1],
                        "raw": r.span.raw_text,
                        "low": r.span.low,
                        "high": r.span.high,
                        "point": r.span.point,
                        "sign": r.sign,
                        "value": r.value,
                    }
                )
                + "\n"
            )
