"""Stratified sampling over classifier-score deciles with importance weights."""

from __future__ import annotations

from typing import Mapping, Sequence

import numpy as np

from ..errors import SamplingError
from .metrics import LabelledItem, LabelledSample

DECILE_EDGES = tuple(i / 10 for i in range(1, 10))  # 0.1 .. 0.9


def stratum_of(score: float, edges: Sequence[float] = DECILE_EDGES) -> int:
    """1-based stratum index; edges are upper bounds of all but the last bin."""
    for i, edge in enumerate(edges):
        if score <= edge:
            return i + 1
    return len(edges) + 1


def stratified_sample(
    scores: Mapping[str, float],
    per_stratum: int,
    seed: int,
    edges: Sequence[float] = DECILE_EDGES,
) -> LabelledSample:
    """Equal-size uniform draw from every stratum, without replacement.

    The returned skeleton carries stratum indices and weights w_i = N_i / N;
    predicted/truth labels are filled in later by the evaluator.
    """
    n_strata = len(edges) + 1
    members: list[list[str]] = [[] for _ in range(n_strata)]
    for pid in sorted(scores):
        members[stratum_of(scores[pid], edges) - 1].append(pid)
    total = len(scores)
    rng = np.random.default_rng(seed)
    items: list[LabelledItem] = []
    for idx, pids in enumerate(members, start=1):
        if len(pids) < per_stratum:
            raise SamplingError(
                f"stratum {idx} has {len(pids)} members, fewer than per_stratum={per_stratum}"
            )
        weight = len(pids) / total
        chosen = rng.choice(len(pids), size=per_stratum, replace=False)
        for j in sorted(chosen):
            items.append(
                LabelledItem(
                    paragraph_ref=pids[j],
                    predicted=None,
                    truth=None,
                    stratum=idx,
                    weight=weight,
                )
            )
    return LabelledSample(items=items)
