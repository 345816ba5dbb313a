"""Precision / recall / F1 with optional importance weights.

Weighted metrics multiply each item's contribution by its stratum weight
w_i = N_i / N (population share), which de-biases estimates computed on an
up-sampled stratified draw.  The alternative per-stratum combination
sum_i w_i * F1_i is exposed separately; strata where F1 is undefined (no
predicted and no true positives) are skipped there.
"""

from __future__ import annotations

import csv
from collections import defaultdict
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Mapping

from ..errors import MetricError, ValidationError


@dataclass
class LabelledItem:
    paragraph_ref: str
    predicted: bool | None
    truth: bool | None
    stratum: int = 1
    weight: float = 1.0

    def __post_init__(self):
        if self.weight <= 0:
            raise ValidationError(f"{self.paragraph_ref}: weight must be > 0")


@dataclass
class LabelledSample:
    items: list[LabelledItem] = field(default_factory=list)

    def complete_items(self) -> list[LabelledItem]:
        missing = [i.paragraph_ref for i in self.items if i.predicted is None or i.truth is None]
        if missing:
            raise MetricError(f"{len(missing)} items lack labels (first: {missing[0]})")
        return self.items


@dataclass
class MetricReport:
    precision: float
    recall: float
    f1: float
    weighted: bool
    counts: dict[str, float]

    def to_dict(self) -> dict:
        return {
            "precision": self.precision,
            "recall": self.recall,
            "f1": self.f1,
            "weighted": self.weighted,
            "counts": self.counts,
        }


def _weighted_counts(items: Iterable[LabelledItem], weighted: bool) -> dict[str, float]:
    counts = {"TP": 0.0, "FP": 0.0, "FN": 0.0, "TN": 0.0}
    for item in items:
        w = item.weight if weighted else 1.0
        if item.predicted and item.truth:
            counts["TP"] += w
        elif item.predicted and not item.truth:
            counts["FP"] += w
        elif not item.predicted and item.truth:
            counts["FN"] += w
        else:
            counts["TN"] += w
    return counts


def prf1(sample: LabelledSample, weighted: bool = False) -> MetricReport:
    items = sample.complete_items()
    if not items:
        raise MetricError("empty sample")
    counts = _weighted_counts(items, weighted)
    tp, fp, fn = counts["TP"], counts["FP"], counts["FN"]
    if tp + fp == 0:
        raise MetricError("precision undefined: no predicted positives")
    if tp + fn == 0:
        raise MetricError("recall undefined: no true positives")
    precision = tp / (tp + fp)
    recall = tp / (tp + fn)
    f1 = 2 * precision * recall / (precision + recall) if precision + recall > 0 else 0.0
    return MetricReport(precision=precision, recall=recall, f1=f1, weighted=weighted, counts=counts)


def stratum_weighted_f1(sample: LabelledSample) -> float:
    """sum_i w_i * F1_i over strata with a defined F1; weights renormalised."""
    by_stratum: dict[int, list[LabelledItem]] = defaultdict(list)
    for item in sample.complete_items():
        by_stratum[item.stratum].append(item)
    total = 0.0
    used_weight = 0.0
    for stratum, items in sorted(by_stratum.items()):
        counts = _weighted_counts(items, weighted=False)
        tp, fp, fn = counts["TP"], counts["FP"], counts["FN"]
        if tp + fp == 0 or tp + fn == 0:
            continue
        precision = tp / (tp + fp)
        recall = tp / (tp + fn)
        f1 = 2 * precision * recall / (precision + recall) if precision + recall > 0 else 0.0
        w = items[0].weight
        total += w * f1
        used_weight += w
    if used_weight == 0:
        raise MetricError("F1 undefined in every stratum")
    return total / used_weight


# --- human annotation ingestion ------------------------------------------------

def read_annotation_csv(path: str | Path) -> dict[str, list[bool]]:
    """CSV `paragraph_id,annotator,label` -> labels per paragraph."""
    out: dict[str, list[bool]] = defaultdict(list)
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        required = {"paragraph_id", "annotator", "label"}
        if reader.fieldnames is None or not required <= set(reader.fieldnames):
            raise ValidationError(f"annotation CSV needs columns {sorted(required)}")
        for row in reader:
            out[row["paragraph_id"]].append(row["label"].strip().lower() in ("1", "true", "yes"))
    return dict(out)


def consensus_from_annotations(labels: Mapping[str, list[bool]]) -> dict[str, bool]:
    """Majority vote per paragraph; ties rejected (use an odd panel)."""
    out = {}
    for pid, votes in labels.items():
        yes = sum(votes)
        no = len(votes) - yes
        if yes == no:
            raise MetricError(f"{pid}: tied annotator votes")
        out[pid] = yes > no
    return out


def spot_check_precision(
    samples_by_topic: Mapping[str, LabelledSample],
) -> dict[str, float]:
    """Per-topic precision table for a tiny top-stratum draw, plus 'overall'."""
    report = {}
    tp_all = fp_all = 0.0
    for topic, sample in sorted(samples_by_topic.items()):
        counts = _weighted_counts(sample.complete_items(), weighted=False)
        tp, fp = counts["TP"], counts["FP"]
        if tp + fp == 0:
            raise MetricError(f"{topic}: no predicted positives to spot-check")
        report[topic] = tp / (tp + fp)
        tp_all += tp
        fp_all += fp
    report["overall"] = tp_all / (tp_all + fp_all)
    return report


def format_table(rows: list[tuple], headers: tuple) -> str:
    """Plain text table for report output."""
    widths = [max(len(str(h)), *(len(str(r[i])) for r in rows)) if rows else len(str(h))
              for i, h in enumerate(headers)]
    def fmt(row):
        return "  ".join(str(v).ljust(w) for v, w in zip(row, widths))
    lines = [fmt(headers), fmt(tuple("-" * w for w in widths))]
    lines.extend(fmt(r) for r in rows)
    return "\n".join(lines)
