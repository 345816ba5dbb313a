"""Recursive (expanding-window) nowcast backtest.

For every nowcast quarter: standardize all design columns and the target on
the current training window only, select hyperparameters by time-series CV
inside that window, fit on the whole window, predict the held-out quarter and
de-standardize with the window's target moments.  The realized target joins
the next window (one-quarter release lag is implied by the design-matrix
lagging: the window for nowcast t contains targets up to t-1).
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

import numpy as np

from ..errors import ProtocolError, ValidationError
from ..periods import quarter_index
from .cv import cv_select, fold_eval_indices
from .panel import DesignMatrix, FeaturePanel, design_matrix
from .solvers import (
    DEFAULT_MAX_SWEEPS,
    DEFAULT_TOL,
    CoefficientVector,
    PenaltySpec,
    fit_linear,
    fit_penalized,
)

SCOPES = ("baseline", "all")


@dataclass(frozen=True)
class ModelSpec:
    name: str
    kind: str   # "ols" | "ridge" | "lasso" | "elastic"
    scope: str = "all"

    def __post_init__(self):
        if self.scope not in SCOPES:
            raise ValidationError(f"{self.name}: unknown scope {self.scope!r}")


BASELINE_MODEL = ModelSpec(name="baseline-ols", kind="ols", scope="baseline")


@dataclass
class Protocol:
    pure_training: int = 36
    nowcasts: int = 39
    folds: int = 10
    lambda_min: float = 0.0
    lambda_max: float = 7.0
    lambda_steps: int = 101
    alpha_steps: int = 10
    precovid_boundary: str = "2020Q1"
    tol: float = DEFAULT_TOL
    max_sweeps: int = DEFAULT_MAX_SWEEPS

    def lambda_grid(self) -> np.ndarray:
        return np.linspace(self.lambda_min, self.lambda_max, self.lambda_steps)

    def alpha_grid(self) -> np.ndarray:
        return np.linspace(0.0, 1.0, self.alpha_steps)

    @classmethod
    def from_json(cls, path: str | Path) -> "Protocol":
        with open(path, encoding="utf-8") as fh:
            return cls(**json.load(fh))


@dataclass
class NowcastRecord:
    quarter: str
    nowcast: float
    actual: float
    lam: float | None
    alpha: float | None
    nonzero: tuple[str, ...]


@dataclass
class BacktestResult:
    model: ModelSpec
    records: list[NowcastRecord]
    rmse_full: float
    rmse_precovid: float
    ratio_full: float | None = None
    ratio_precovid: float | None = None

    def errors(self) -> np.ndarray:
        return np.array([r.nowcast - r.actual for r in self.records])

    def to_dict(self) -> dict:
        return {
            "model": {"name": self.model.name, "kind": self.model.kind, "scope": self.model.scope},
            "rmse_full": self.rmse_full,
            "rmse_precovid": self.rmse_precovid,
            "ratio_full": self.ratio_full,
            "ratio_precovid": self.ratio_precovid,
            "records": [
                {
                    "quarter": r.quarter,
                    "nowcast": r.nowcast,
                    "actual": r.actual,
                    "lambda": r.lam,
                    "alpha": r.alpha,
                    "nonzero": list(r.nonzero),
                }
                for r in self.records
            ],
        }

    def summary_csv(self) -> str:
        lines = ["quarter,nowcast,actual,lambda,alpha,n_nonzero"]
        for r in self.records:
            lam = "" if r.lam is None else f"{r.lam:.6g}"
            alpha = "" if r.alpha is None else f"{r.alpha:.6g}"
            lines.append(
                f"{r.quarter},{r.nowcast:.8g},{r.actual:.8g},{lam},{alpha},{len(r.nonzero)}"
            )
        return "\n".join(lines) + "\n"


def _standardize_window(X: np.ndarray, y: np.ndarray, x_eval: np.ndarray):
    """Window-local standardization; zero-variance columns carry no signal
    inside this window and are scaled to zero."""
    x_mean = X.mean(axis=0)
    x_sd = X.std(axis=0, ddof=1)
    y_mean = y.mean()
    y_sd = y.std(ddof=1)
    if y_sd == 0:
        raise ProtocolError("target constant within training window")
    dead = x_sd == 0
    x_sd_safe = np.where(dead, 1.0, x_sd)
    Xs = (X - x_mean) / x_sd_safe
    Xs[:, dead] = 0.0
    ev = (x_eval - x_mean) / x_sd_safe
    ev[dead] = 0.0
    return Xs, (y - y_mean) / y_sd, ev, y_mean, y_sd


def run_backtest(
    panel: FeaturePanel,
    models: Sequence[ModelSpec | str],
    protocol: Protocol = Protocol(),
    include_baseline: bool = True,
) -> dict[str, BacktestResult]:
    """Backtest each model spec; RMSE ratios are relative to baseline-ols."""
    specs: list[ModelSpec] = []
    for m in models:
        specs.append(ModelSpec(name=f"{m}-all", kind=m, scope="all") if isinstance(m, str) else m)
    if include_baseline and not any(s.name == BASELINE_MODEL.name for s in specs):
        specs.insert(0, BASELINE_MODEL)

    design = design_matrix(panel)
    usable = design.y.size
    needed = protocol.pure_training + protocol.nowcasts
    if usable < needed:
        raise ProtocolError(
            f"panel provides {usable} usable rows; protocol needs {needed}"
        )
    fold_eval_indices(protocol.pure_training, protocol.folds)  # validate fold shape early

    results: dict[str, BacktestResult] = {}
    boundary = quarter_index(protocol.precovid_boundary)
    for spec in specs:
        cols = design.column_indices(None if spec.scope == "all" else "baseline")
        names = tuple(design.names[i] for i in cols)
        records: list[NowcastRecord] = []
        for k in range(protocol.nowcasts):
            t = protocol.pure_training + k
            X_train = design.X[:t, cols]
            y_train = design.y[:t]
            Xs, ys, x_eval, y_mean, y_sd = _standardize_window(
                X_train, y_train, design.X[t, cols]
            )
            lam = alpha = None
            if spec.kind == "ols":
                coef = fit_linear(Xs, ys, names=names, allow_rank_deficient=True)
            else:
                chosen = cv_select(
                    Xs, ys, spec.kind,
                    folds=protocol.folds,
                    lambdas=protocol.lambda_grid(),
                    alphas=protocol.alpha_grid(),
                    tol=protocol.tol,
                    max_sweeps=protocol.max_sweeps,
                ).best
                coef = fit_penalized(
                    Xs, ys, chosen, names=names,
                    tol=protocol.tol, max_sweeps=protocol.max_sweeps,
                )
                lam, alpha = chosen.lam, chosen.effective_alpha()
            predicted = float((coef.intercept + x_eval @ coef.slopes) * y_sd + y_mean)
            records.append(
                NowcastRecord(
                    quarter=design.quarters[t],
                    nowcast=predicted,
                    actual=float(design.y[t]),
                    lam=lam,
                    alpha=alpha,
                    nonzero=coef.nonzero_names() if spec.kind in ("lasso", "elastic") else (),
                )
            )
        errors = np.array([r.nowcast - r.actual for r in records])
        pre = np.array([quarter_index(r.quarter) < boundary for r in records])
        rmse_full = float(np.sqrt(np.mean(errors**2)))
        rmse_pre = float(np.sqrt(np.mean(errors[pre] ** 2))) if pre.any() else float("nan")
        results[spec.name] = BacktestResult(
            model=spec, records=records, rmse_full=rmse_full, rmse_precovid=rmse_pre
        )

    base = results.get(BASELINE_MODEL.name)
    if base is not None:
        for res in results.values():
            res.ratio_full = res.rmse_full / base.rmse_full
            res.ratio_precovid = (
                res.rmse_precovid / base.rmse_precovid
                if not np.isnan(res.rmse_precovid) and not np.isnan(base.rmse_precovid)
                else None
            )
    return results


def selection_frequency(result: BacktestResult) -> list[dict]:
    """How often each variable enters the chosen sparse model, sorted
    descending; the unpenalized intercept never appears."""
    counts: dict[str, int] = {}
    for record in result.records:
        for name in record.nonzero:
            counts[name] = counts.get(name, 0) + 1
    total = len(result.records)
    rows = [
        {"variable": name, "count": count, "percent": 100.0 * count / total}
        for name, count in counts.items()
    ]
    rows.sort(key=lambda r: (-r["count"], r["variable"]))
    return rows


def selection_frequency_csv(rows: list[dict]) -> str:
    lines = ["variable,count,percent"]
    for r in rows:
        lines.append(f"{r['variable']},{r['count']},{r['percent']:.6g}")
    return "\n".join(lines) + "\n"
