"""Synthetic data-generating processes for backtest validation.

The planted-sparse DGP hides a few true signals among many irrelevant
covariates: sparse selectors should find them, a fully saturated OLS should
overfit, and the baseline (which never sees the signals) sits in between.
"""

from __future__ import annotations

import numpy as np

from ..periods import quarter_range
from .panel import ColumnSpec, FeaturePanel

BASELINE_NAMES = ("unemp_gap", "unutil_gap", "d_inf_exp")


def _ar1(rng: np.random.Generator, n: int, phi: float = 0.6) -> np.ndarray:
    innovations = rng.normal(0.0, np.sqrt(1 - phi**2), size=n)
    out = np.empty(n)
    out[0] = rng.normal()
    for t in range(1, n):
        out[t] = phi * out[t - 1] + innovations[t]
    return out


def planted_sparse_panel(
    seed: int,
    n_quarters: int = 75,
    n_text: int = 44,
    n_signals: int = 3,
    signal_scale: float = 0.75,
    noise_sd: float = 0.45,
    start: str = "2006Q1",
) -> tuple[FeaturePanel, tuple[str, ...]]:
    """Panel with `n_signals` true text predictors among `n_text` covariates.

    y_t = 0.2 y_{t-1} + 0.25 m1_{t-1} + scale * (s1 + s2 - s3)_t + noise.
    One extra leading quarter is simulated so the design matrix keeps
    `n_quarters` usable rows after lagging.
    """
    rng = np.random.default_rng(seed)
    n = n_quarters + 1
    quarters = quarter_range(start, n)

    macro = {name: _ar1(rng, n, phi=0.7) for name in BASELINE_NAMES}
    # decoy indicators co-move through common factors, which keeps the
    # saturated OLS design poorly conditioned near the interpolation
    # threshold; the true signals are almost purely idiosyncratic so sparse
    # selectors can isolate them
    factors = np.column_stack([_ar1(rng, n, phi=0.6) for _ in range(2)])
    signal_names = tuple(f"x{i + 1:02d}" for i in range(n_signals))
    text = {}
    for i in range(n_text):
        name = f"x{i + 1:02d}"
        if name in signal_names:
            text[name] = factors @ rng.normal(0.0, 0.1, size=2) + _ar1(rng, n, phi=0.6)
        else:
            text[name] = factors @ rng.normal(0.0, 0.6, size=2) + 0.7 * _ar1(rng, n, phi=0.6)
    signs = np.array([1.0, 1.0, -1.0][:n_signals] or [1.0])

    y = np.zeros(n)
    noise = rng.normal(0.0, noise_sd, size=n)
    for t in range(n):
        signal = sum(
            float(signs[i % signs.size]) * text[name][t] for i, name in enumerate(signal_names)
        )
        prev_y = y[t - 1] if t > 0 else 0.0
        prev_m = macro["unemp_gap"][t - 1] if t > 0 else 0.0
        y[t] = 0.2 * prev_y + 0.25 * prev_m + signal_scale * signal + noise[t]

    columns: dict[str, np.ndarray] = {}
    specs: dict[str, ColumnSpec] = {}
    # the target series doubles as the lagged-target baseline regressor
    columns["wpi_growth"] = y.copy()
    specs["wpi_growth"] = ColumnSpec("wpi_growth", "baseline", available_current=False, include_lag=False)
    for name in BASELINE_NAMES:
        columns[name] = macro[name]
        specs[name] = ColumnSpec(name, "baseline", available_current=False, include_lag=False)
    for name, series in text.items():
        columns[name] = series
        specs[name] = ColumnSpec(name, "text", available_current=True, include_lag=False)

    panel = FeaturePanel(
        quarters=quarters, target=y, columns=columns, specs=specs, target_name="wpi_growth"
    )
    panel.validate()
    return panel, signal_names


def synthetic_macro(
    quarters: list[str], seed: int, wage_signal: dict[str, float] | None = None
) -> dict[str, dict[str, float]]:
    """Macro input block for demos: AR gap series plus a target that can be
    tilted toward a supplied quarterly wage indicator."""
    rng = np.random.default_rng(seed)
    n = len(quarters)
    out: dict[str, dict[str, float]] = {}
    for name in BASELINE_NAMES:
        series = _ar1(rng, n, phi=0.7)
        out[name] = {q: float(v) for q, v in zip(quarters, series)}
    base = 0.6 + 0.2 * _ar1(rng, n, phi=0.5)
    if wage_signal is not None:
        tilt = np.array([wage_signal.get(q, 0.0) for q in quarters])
        if tilt.std() > 0:
            base = base + 0.15 * (tilt - tilt.mean()) / tilt.std()
    out["wpi_growth"] = {q: float(v) for q, v in zip(quarters, base)}
    return out
