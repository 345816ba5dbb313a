"""Default nowcast feature set assembled from a corpus snapshot.

22 liaison-derived variables: 5 staff-score means, 13 text indicators
(dictionary and scored exposure/tone for wages and labour, the uncertainty
index, trimmed numeric extractions for wages and prices, a hand-collected
wages benchmark, and scored prices exposure) plus 4 exposure-x-tone
interactions.  With one-period lags that is 44 covariates on top of the
4-lag baseline block.
"""

from __future__ import annotations

from typing import Mapping, Sequence

from ..classify import SentimentLexicon, TopicDictionary
from ..indices import DictionaryMethod, ScoredMethod, topic_exposure_series, topic_tone_series, uncertainty_index
from ..numex import LiaisonRateObs, period_series_trimmed
from ..pipeline import liaison_rate_observations, staff_score_observations
from ..store.engine import Snapshot
from .panel import FeatureDef, FeaturePanel, assemble_features

STAFF_NAMES = ("wages", "expected_wages", "employment_intentions", "prices", "expected_prices")

HAND_COLLECTED_TRIM = (15.0, 85.0)


def default_feature_defs(target: str = "wpi_growth") -> list[FeatureDef]:
    defs: list[FeatureDef] = []
    # the target series re-enters as its own lag, like the rest of the
    # baseline block (not available in the current quarter)
    for name in (target, "unemp_gap", "unutil_gap", "d_inf_exp"):
        defs.append(FeatureDef(name, "macro", name, block="baseline",
                               available_current=False, include_lag=False))
    for name in STAFF_NAMES:
        defs.append(FeatureDef(f"staff_{name}", "indicator", f"staff_{name}", block="staff"))
    text = [
        "wages_dict_exposure", "labour_dict_exposure",
        "wages_dict_tone", "labour_dict_tone",
        "wages_lm_exposure", "labour_lm_exposure",
        "wages_lm_tone", "labour_lm_tone",
        "prices_lm_exposure",
        "uncertainty_dict_exposure",
        "wages_lm_extract", "prices_lm_extract",
        "wages_hand_collected",
    ]
    defs.extend(FeatureDef(name, "indicator", name, block="text") for name in text)
    for a, b in (
        ("wages_lm_exposure", "wages_lm_tone"),
        ("labour_lm_exposure", "labour_lm_tone"),
        ("wages_dict_exposure", "wages_dict_tone"),
        ("labour_dict_exposure", "labour_dict_tone"),
    ):
        defs.append(FeatureDef(f"{a}_x_{b.rsplit('_', 1)[-1]}", "interaction", (a, b), block="text"))
    return defs


def _series_map(points) -> dict[str, float]:
    return {p.period: p.value for p in points}


def indicator_inputs_from_snapshot(
    snapshot: Snapshot,
    wages_dict: TopicDictionary,
    labour_dict: TopicDictionary,
    uncertainty_dict: TopicDictionary,
    lexicon: SentimentLexicon,
    threshold: float = 0.9,
    hand_rates: Sequence[LiaisonRateObs] | None = None,
    granularity: str = "quarter",
) -> dict[str, dict[str, float]]:
    """Quarterly indicator series keyed by the default feature names."""
    scored = ScoredMethod(threshold=threshold)
    wages_m = DictionaryMethod(wages_dict, lexicon)
    labour_m = DictionaryMethod(labour_dict, lexicon)
    records = list(snapshot.records.values())

    out: dict[str, dict[str, float]] = {}
    out["wages_dict_exposure"] = _series_map(
        topic_exposure_series(snapshot, "wages", wages_m, granularity).points)
    out["labour_dict_exposure"] = _series_map(
        topic_exposure_series(snapshot, "labour", labour_m, granularity).points)
    out["wages_dict_tone"] = _series_map(
        topic_tone_series(snapshot, "wages", wages_m, granularity).points)
    out["labour_dict_tone"] = _series_map(
        topic_tone_series(snapshot, "labour", labour_m, granularity).points)
    out["wages_lm_exposure"] = _series_map(
        topic_exposure_series(snapshot, "wages", scored, granularity).points)
    out["labour_lm_exposure"] = _series_map(
        topic_exposure_series(snapshot, "labour", scored, granularity).points)
    out["prices_lm_exposure"] = _series_map(
        topic_exposure_series(snapshot, "prices", scored, granularity).points)
    out["wages_lm_tone"] = _series_map(
        topic_tone_series(snapshot, "wages", scored, granularity).points)
    out["labour_lm_tone"] = _series_map(
        topic_tone_series(snapshot, "labour", scored, granularity).points)
    out["uncertainty_dict_exposure"] = _series_map(
        uncertainty_index(snapshot, uncertainty_dict, granularity).points)

    wages_obs = liaison_rate_observations(records, "wages")
    prices_obs = liaison_rate_observations(records, "prices")
    out["wages_lm_extract"] = {
        p["period"]: p["mean"]
        for p in period_series_trimmed(wages_obs, "wages", granularity).points
    }
    out["prices_lm_extract"] = {
        p["period"]: p["mean"]
        for p in period_series_trimmed(prices_obs, "prices", granularity).points
    }
    if hand_rates is not None:
        out["wages_hand_collected"] = {
            p["period"]: p["mean"]
            for p in period_series_trimmed(
                list(hand_rates), "wages", granularity, trim=HAND_COLLECTED_TRIM
            ).points
        }
    for name in STAFF_NAMES:
        obs = staff_score_observations(records, name)
        out[f"staff_{name}"] = {
            p["period"]: p["mean"]
            for p in period_series_trimmed(obs, name, granularity, trim=(0.0, 100.0)).points
        }
    return out


def panel_from_snapshot(
    snapshot: Snapshot,
    macro: Mapping[str, Mapping[str, float]],
    wages_dict: TopicDictionary,
    labour_dict: TopicDictionary,
    uncertainty_dict: TopicDictionary,
    lexicon: SentimentLexicon,
    threshold: float = 0.9,
    hand_rates: Sequence[LiaisonRateObs] | None = None,
    quarters: Sequence[str] | None = None,
) -> FeaturePanel:
    indicators = indicator_inputs_from_snapshot(
        snapshot, wages_dict, labour_dict, uncertainty_dict, lexicon,
        threshold=threshold, hand_rates=hand_rates,
    )
    defs = default_feature_defs()
    if hand_rates is None:
        defs = [d for d in defs if d.name != "wages_hand_collected"]
    return assemble_features(indicators, macro, defs, quarters=quarters)
