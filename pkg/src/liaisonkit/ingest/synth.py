"""Seeded synthetic corpus generator with ground-truth sidecar.

The real interview corpus is confidential, so tests and demos run on
generated documents whose topic labels, tone and numeric rates are planted
and recorded in a truth sidecar keyed by paragraph id.  Rate sentences are
drawn from templates that the extraction grammar can parse back exactly.
"""

from __future__ import annotations

import dataclasses
import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable

import numpy as np

from ..errors import ValidationError
from ..periods import quarter_range, quarter_start
from .parser import REGIONS, STAFF_SCORE_NAMES, RawDocument, paragraph_id

_INDUSTRIES = [
    ("construction", "4100"),
    ("retail", "4711"),
    ("manufacturing", "2500"),
    ("mining", "0600"),
    ("services", "7000"),
]
_REGION_CYCLE = sorted(REGIONS)

_SYNONYMS = {
    "firm_word": ["firm", "business", "company"],
    "goods_word": ["goods", "services", "products"],
    "labour_word": ["labour", "workforce", "staff", "employees", "workers"],
    "tight_word": ["tight", "constrained", "stretched"],
}

# (template, planted tone). Positive templates carry positive lexicon words,
# negative ones negative words, so dictionary tone agrees in sign.
_TOPIC_SENTENCES: dict[str, dict[str, list[str]]] = {
    "demand": {
        "pos": [
            "Demand for the {firm_word}'s {goods_word} strengthened over the year, with solid gains in new orders.",
            "Sales volumes improved and forward orders for {goods_word} remained strong.",
        ],
        "neu": [
            "Demand for {goods_word} was broadly stable over the period.",
            "Order books for the {firm_word} were little changed from a year earlier.",
        ],
        "neg": [
            "Demand weakened noticeably, with orders for {goods_word} declining across key markets.",
            "The {firm_word} reported weak sales and difficult trading conditions.",
        ],
    },
    "wages": {
        "pos": [
            "Competition for skills supported strong wage increases at the {firm_word}.",
            "The {firm_word} reported strong wages growth to retain experienced staff.",
        ],
        "neu": [
            "Wage outcomes for the {firm_word} were in line with the previous review.",
            "Wages were reviewed on the usual annual cycle.",
        ],
        "neg": [
            "Wage growth slowed and bonuses were cut across the {firm_word}.",
            "The {firm_word} reported weak wages growth given soft conditions.",
        ],
    },
    "prices": {
        "pos": [
            "The {firm_word} achieved stronger prices on new contracts.",
            "Price increases were accepted by customers, supporting improved margins.",
        ],
        "neu": [
            "Final prices were reviewed on the normal schedule.",
            "The {firm_word} kept list prices under regular review.",
        ],
        "neg": [
            "Discounting pressure forced prices lower, squeezing margins for the {firm_word}.",
            "The {firm_word} reported weak pricing power and declining realised prices.",
        ],
    },
    "labour": {
        "pos": [
            "Availability of {labour_word} improved and turnover eased for the {firm_word}.",
            "Finding suitable {labour_word} became easier, with stronger applicant numbers.",
        ],
        "neu": [
            "The {firm_word} reported that {labour_word} numbers were steady.",
            "Headcount of {labour_word} was broadly unchanged over the year.",
        ],
        "neg": [
            "Shortages of skilled {labour_word} remained a difficult constraint.",
            "The market for {labour_word} stayed {tight_word}, with vacancies hard to fill.",
        ],
    },
    "outlook": {
        "pos": [
            "The outlook improved, although some uncertainty remains around demand.",
        ],
        "neu": [
            "The outlook is uncertain and conditions remain hard to predict.",
        ],
        "neg": [
            "The outlook is highly uncertain, with unpredictable demand and volatile input costs weighing on planning.",
        ],
    },
}

_UNCERTAINTY_SPIKE = [
    "Uncertainty around future demand is elevated and planning horizons have shortened.",
    "Conditions are volatile and unpredictable, and the {firm_word} is deferring commitments amid the uncertainty.",
]

_TOPIC_HEADINGS = {
    "demand": "Demand",
    "wages": "Wages",
    "prices": "Prices",
    "labour": "Labour",
    "outlook": "Outlook",
}

# Rate sentence templates: (template, sign, kind) where kind in
# {point, approx, range, zero}. {var}/{Var} expand to the anchor word.
_RATE_TEMPLATES = [
    ("{Var} rose by {r} per cent over the past year.", 1, "point"),
    ("The {firm_word} lifted {var} by around {r} per cent.", 1, "approx"),
    ("{Var} increased by {a}-{b} per cent across the {firm_word}.", 1, "range"),
    ("{Var} grew {a} to {b} per cent on average.", 1, "range"),
    ("{Var} fell by {r} per cent.", -1, "point"),
    ("{Var} declined by around {r} per cent compared with last year.", -1, "approx"),
    ("{Var} were steady at 0 per cent.", 0, "zero"),
]


@dataclass(frozen=True)
class RateSpec:
    mean: float = 3.0
    sd: float = 1.0
    p_negative: float = 0.15
    p_zero: float = 0.05
    sentence_prob: float = 0.6


@dataclass(frozen=True)
class TruthRecord:
    paragraph_id: str
    topics: tuple[str, ...]
    planted_rate: float | None
    planted_tone: float | None


@dataclass
class CorpusConfig:
    firms: int = 20
    start: str = "2018Q1"
    quarters: int = 8
    topics: tuple[str, ...] = ("demand", "wages", "prices", "labour", "outlook")
    paragraphs_per_topic: tuple[int, int] = (1, 2)
    rate_specs: dict[str, RateSpec] = field(
        default_factory=lambda: {"wages": RateSpec(3.0, 0.5), "prices": RateSpec(2.5, 1.0)}
    )
    liaison_prob: float = 1.0
    bullet_prob: float = 0.2
    uncertainty_quarter: str | None = None
    uncertainty_scale: int = 3

    def validate(self) -> None:
        if self.firms < 1:
            raise ValidationError("config needs at least one firm")
        if self.quarters < 1:
            raise ValidationError("config needs a non-empty date range")
        for topic in self.rate_specs:
            if topic not in self.topics:
                raise ValidationError(f"rate spec for unknown topic {topic!r}")
        lo, hi = self.paragraphs_per_topic
        if lo < 1 or hi < lo:
            raise ValidationError("paragraphs_per_topic must be (lo, hi) with 1 <= lo <= hi")

    @classmethod
    def from_dict(cls, obj: dict) -> "CorpusConfig":
        kwargs = dict(obj)
        if "rate_specs" in kwargs:
            kwargs["rate_specs"] = {k: RateSpec(**v) for k, v in kwargs["rate_specs"].items()}
        if "topics" in kwargs:
            kwargs["topics"] = tuple(kwargs["topics"])
        if "paragraphs_per_topic" in kwargs:
            kwargs["paragraphs_per_topic"] = tuple(kwargs["paragraphs_per_topic"])
        cfg = cls(**kwargs)
        cfg.validate()
        return cfg

    @classmethod
    def from_json(cls, path: str | Path) -> "CorpusConfig":
        with open(path, encoding="utf-8") as fh:
            return cls.from_dict(json.load(fh))


def _fill(template: str, rng: np.random.Generator) -> str:
    out = template
    for slot, options in _SYNONYMS.items():
        while "{" + slot + "}" in out:
            out = out.replace("{" + slot + "}", options[int(rng.integers(len(options)))], 1)
    return out


def _draw_rate_sentence(
    variable: str, spec: RateSpec, rng: np.random.Generator
) -> tuple[str, float]:
    """Render one parseable rate sentence; returns (sentence, signed value)."""
    u = rng.random()
    if u < spec.p_zero:
        sign = 0
    elif u < spec.p_zero + spec.p_negative:
        sign = -1
    else:
        sign = 1
    options = [t for t in _RATE_TEMPLATES if t[1] == sign]
    template, _, kind = options[int(rng.integers(len(options)))]
    magnitude = max(0.1, round(abs(float(rng.normal(spec.mean, spec.sd))), 1))
    var = variable
    fields: dict[str, object] = {"var": var, "Var": var.capitalize()}
    if kind == "zero":
        value = 0.0
    elif kind == "range":
        a = max(0, int(round(magnitude - 0.5)))
        b = a + 1
        fields.update(a=a, b=b)
        value = sign * (a + b) / 2.0
    else:
        fields.update(r=magnitude)
        value = sign * magnitude
    sentence = template
    for key, val in fields.items():
        sentence = sentence.replace("{" + key + "}", str(val))
    return _fill(sentence, rng), value


def generate_synthetic_corpus(
    config: CorpusConfig, seed: int
) -> tuple[list[RawDocument], list[TruthRecord]]:
    """Deterministic corpus + truth sidecar for the given (config, seed)."""
    config.validate()
    rng = np.random.default_rng(seed)
    quarters = quarter_range(config.start, config.quarters)
    docs: list[RawDocument] = []
    truths: list[TruthRecord] = []

    base_scores = {
        firm: {name: int(np.clip(round(rng.normal(2.0, 1.0)), -5, 5)) for name in STAFF_SCORE_NAMES}
        for firm in range(config.firms)
    }
    seq = 0
    for qi, quarter in enumerate(quarters):
        spike = config.uncertainty_quarter == quarter
        for firm in range(config.firms):
            if rng.random() >= config.liaison_prob:
                continue
            seq += 1
            liaison_id = f"L{seq:06d}"
            start = quarter_start(quarter)
            date = start.replace(
                month=start.month + firm % 3, day=int(5 + rng.integers(20))
            )
            scores = {}
            for name in STAFF_SCORE_NAMES:
                prev = base_scores[firm][name]
                nxt = int(np.clip(round(0.7 * prev + rng.normal(0, 1.0)), -5, 5))
                base_scores[firm][name] = nxt
                scores[name] = nxt

            lines: list[str] = []
            body_index = 0
            lo, hi = config.paragraphs_per_topic
            for topic in config.topics:
                lines.append(f"## {_TOPIC_HEADINGS.get(topic, topic.title())}")
                lines.append("")
                n_paras = int(rng.integers(lo, hi + 1))
                for _ in range(n_paras):
                    tone_bucket = ["neg", "neu", "pos"][int(rng.integers(3))]
                    tone_value = {"neg": -0.6, "neu": 0.0, "pos": 0.6}[tone_bucket]
                    pool = _TOPIC_SENTENCES[topic][tone_bucket]
                    sents = [_fill(pool[int(rng.integers(len(pool)))], rng)]
                    rate_value: float | None = None
                    spec = config.rate_specs.get(topic)
                    if spec is not None and rng.random() < spec.sentence_prob:
                        rate_sentence, rate_value = _draw_rate_sentence(topic, spec, rng)
                        sents.append(rate_sentence)
                    if topic == "outlook" and spike:
                        for _ in range(config.uncertainty_scale):
                            sents.append(_fill(_UNCERTAINTY_SPIKE[int(rng.integers(len(_UNCERTAINTY_SPIKE)))], rng))
                    text = " ".join(sents)
                    if rng.random() < config.bullet_prob:
                        lines.append(f"- {text}")
                    else:
                        lines.append(text)
                    lines.append("")
                    truths.append(
                        TruthRecord(
                            paragraph_id=paragraph_id(liaison_id, body_index),
                            topics=(topic,),
                            planted_rate=rate_value,
                            planted_tone=tone_value,
                        )
                    )
                    body_index += 1

            industry = _INDUSTRIES[firm % len(_INDUSTRIES)]
            doc = RawDocument(
                liaison_id=liaison_id,
                meeting_date=date,
                firm_id=f"F{firm + 1:04d}",
                industry_code=industry[1],
                region=_REGION_CYCLE[firm % len(_REGION_CYCLE)],
                headcount_bucket=["small", "medium", "large"][firm % 3],
                staff_scores=scores,
                body="\n".join(lines).rstrip("\n") + "\n",
            )
            docs.append(doc)
    return docs, truths


def write_truth_jsonl(truths: Iterable[TruthRecord], path: str | Path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for t in truths:
            fh.write(json.dumps(dataclasses.asdict(t), ensure_ascii=False) + "\n")


def read_truth_jsonl(path: str | Path) -> dict[str, TruthRecord]:
    out: dict[str, TruthRecord] = {}
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            if not line.strip():
                continue
            obj = json.loads(line)
            rec = TruthRecord(
                paragraph_id=obj["paragraph_id"],
                topics=tuple(obj["topics"]),
                planted_rate=obj.get("planted_rate"),
                planted_tone=obj.get("planted_tone"),
            )
            out[rec.paragraph_id] = rec
    return out
