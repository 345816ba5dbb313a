"""Series validation: lead/lag correlation profiles, Granger tests, error reports."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np
from scipy import stats

from ..errors import MetricError, ValidationError


def _pearson(a: np.ndarray, b: np.ndarray) -> float:
    if a.std() == 0 or b.std() == 0:
        raise ValidationError("constant series has no defined correlation")
    return float(np.corrcoef(a, b)[0, 1])


def correlation_profile(
    series_a: Sequence[float], series_b: Sequence[float], max_lead_lag: int
) -> list[dict]:
    """Pearson r at each lag; positive lag means the first series leads.

    At lag L, a[t - L] is aligned with b[t].
    """
    a = np.asarray(series_a, dtype=float)
    b = np.asarray(series_b, dtype=float)
    if a.size != b.size:
        raise ValidationError("series lengths differ")
    out = []
    for lag in range(-max_lead_lag, max_lead_lag + 1):
        if lag >= 0:
            x, y = a[: a.size - lag or None], b[lag:]
        else:
            x, y = a[-lag:], b[: b.size + lag]
        if x.size < 8:
            raise ValidationError(f"overlap at lag {lag} shorter than 8 periods")
        out.append({"lag": lag, "r": _pearson(x, y)})
    return out


def peak_correlation(profile: list[dict]) -> dict:
    return max(profile, key=lambda p: p["r"])


def _lag_matrix(y: np.ndarray, lags: int) -> np.ndarray:
    return np.column_stack([y[lags - k - 1 : y.size - k - 1] for k in range(lags)])


def granger_test(x: Sequence[float], y: Sequence[float], lags: int) -> dict:
    """Does x Granger-cause y? Restricted-vs-unrestricted OLS F test.

    Restricted: y_t on its own lags.  Unrestricted: plus lags of x.
    Stationarity is the caller's responsibility.
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.size != y.size:
        raise ValidationError("series lengths differ")
    if x.size <= 3 * lags:
        raise ValidationError(f"length {x.size} too short for {lags} lags")
    if x.std() == 0 or y.std() == 0:
        raise ValidationError("constant series")
    target = y[lags:]
    n = target.size
    ones = np.ones((n, 1))
    restricted = np.column_stack([ones, _lag_matrix(y, lags)])
    unrestricted = np.column_stack([restricted, _lag_matrix(x, lags)])

    def rss(design: np.ndarray) -> float:
        coef, *_ = np.linalg.lstsq(design, target, rcond=None)
        resid = target - design @ coef
        return float(resid @ resid)

    rss_r = rss(restricted)
    rss_u = rss(unrestricted)
    k_u = unrestricted.shape[1]
    if n <= k_u:
        raise ValidationError("not enough observations for the unrestricted model")
    if rss_u <= 0:
        raise ValidationError("singular design: zero unrestricted residual")
    f_stat = ((rss_r - rss_u) / lags) / (rss_u / (n - k_u))
    p_value = float(stats.f.sf(max(f_stat, 0.0), lags, n - k_u))
    return {"direction": "x->y", "f_stat": float(f_stat), "p_value": p_value, "lags": lags}


def granger_bidirectional(x: Sequence[float], y: Sequence[float], lags: int) -> dict:
    forward = granger_test(x, y, lags)
    backward = granger_test(y, x, lags)
    backward["direction"] = "y->x"
    return {"x->y": forward, "y->x": backward}


@dataclass
class ErrorReport:
    n: int
    mean: float
    median: float
    mean_abs: float
    sd: float
    series_correlation: float

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "mean": self.mean,
            "median": self.median,
            "mean_abs": self.mean_abs,
            "sd": self.sd,
            "series_correlation": self.series_correlation,
        }


def extraction_error_report(
    extracted: Mapping[str, tuple[str, float]],
    benchmark: Mapping[str, tuple[str, float]],
) -> ErrorReport:
    """Per-liaison errors (extracted - benchmark) plus period-series correlation.

    Both mappings are liaison_id -> (period, value); only matched liaisons
    count, and at least 10 matches are required.
    """
    matched = sorted(set(extracted) & set(benchmark))
    if len(matched) < 10:
        raise MetricError(f"only {len(matched)} matched liaisons; need >= 10")
    errors = np.array([extracted[k][1] - benchmark[k][1] for k in matched])

    def period_means(source: Mapping[str, tuple[str, float]]) -> dict[str, float]:
        by_period: dict[str, list[float]] = {}
        for key in matched:
            period, value = source[key]
            by_period.setdefault(period, []).append(value)
        return {p: float(np.mean(v)) for p, v in by_period.items()}

    ext_series = period_means(extracted)
    bench_series = period_means(benchmark)
    periods = sorted(set(ext_series) & set(bench_series))
    a = np.array([ext_series[p] for p in periods])
    b = np.array([bench_series[p] for p in periods])
    if len(periods) < 2 or a.std() == 0 or b.std() == 0:
        correlation = 1.0 if np.allclose(a, b) else float("nan")
    else:
        correlation = _pearson(a, b)
    return ErrorReport(
        n=len(matched),
        mean=float(errors.mean()),
        median=float(np.median(errors)),
        mean_abs=float(np.abs(errors).mean()),
        sd=float(errors.std(ddof=1)) if errors.size > 1 else 0.0,
        series_correlation=correlation,
    )
