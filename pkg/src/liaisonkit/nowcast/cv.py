"""Expanding-window time-series cross-validation over the hyperparameter grid.

The training window is cut into `folds` contiguous, ordered, near-equal
blocks (remainders go to the earliest folds).  For each fold the model is
fitted on all observations strictly before the block's last observation and
scored on that single observation; the grid point minimising the mean of the
per-fold RMSEs (one observation each, so |error|) wins.  Ties resolve to the
smallest lambda, then the smallest alpha.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..errors import ProtocolError
from .solvers import DEFAULT_MAX_SWEEPS, DEFAULT_TOL, PenaltySpec, solve_path

LAMBDA_GRID = np.linspace(0.0, 7.0, 101)
ALPHA_GRID = np.linspace(0.0, 1.0, 10)


def grid_for(kind: str, lambdas: np.ndarray | None = None,
             alphas: np.ndarray | None = None) -> tuple[np.ndarray, np.ndarray]:
    lambdas = LAMBDA_GRID if lambdas is None else np.asarray(lambdas, dtype=float)
    if kind == "ridge":
        return lambdas, np.array([0.0])
    if kind == "lasso":
        return lambdas, np.array([1.0])
    if kind == "elastic":
        alphas = ALPHA_GRID if alphas is None else np.asarray(alphas, dtype=float)
        return lambdas, alphas
    raise ProtocolError(f"no hyperparameter grid for kind {kind!r}")


def fold_eval_indices(n: int, folds: int = 10) -> list[int]:
    """Last index of each contiguous block; remainder enlarges earliest folds."""
    if n < folds:
        raise ProtocolError(f"window of {n} observations cannot form {folds} folds")
    base = n // folds
    sizes = [base + (1 if i < n % folds else 0) for i in range(folds)]
    out, pos = [], 0
    for size in sizes:
        pos += size
        out.append(pos - 1)
    return out


@dataclass
class CvResult:
    best: PenaltySpec
    lambdas: np.ndarray
    alphas: np.ndarray
    surface: np.ndarray  # mean RMSE across folds, shape (n_alpha, n_lambda)

    def best_score(self) -> float:
        return float(self.surface.min())


def cv_select(
    X: np.ndarray,
    y: np.ndarray,
    kind: str,
    folds: int = 10,
    lambdas: np.ndarray | None = None,
    alphas: np.ndarray | None = None,
    min_fit: int = 1,
    tol: float = DEFAULT_TOL,
    max_sweeps: int = DEFAULT_MAX_SWEEPS,
) -> CvResult:
    """Pick (lambda, alpha) for the given training window."""
    X = np.asarray(X, dtype=float)
    y = np.asarray(y, dtype=float)
    n = y.size
    lambdas, alphas = grid_for(kind, lambdas, alphas)
    evals = fold_eval_indices(n, folds)
    if evals[0] < min_fit:
        raise ProtocolError(f"first fold trains on {evals[0]} observations (< {min_fit})")

    errors = np.zeros((alphas.size, lambdas.size, folds))
    for f, e in enumerate(evals):
        X_train, y_train = X[:e], y[:e]
        x_mean = X_train.mean(axis=0)
        y_mean = y_train.mean()
        Xc = X_train - x_mean
        yc = y_train - y_mean
        G = Xc.T @ Xc
        b = Xc.T @ yc
        x_eval = X[e] - x_mean
        for a, alpha in enumerate(alphas):
            coefs, _ = solve_path(G, b, lambdas, float(alpha), tol, max_sweeps)
            preds = y_mean + coefs @ x_eval
            errors[a, :, f] = np.abs(preds - y[e])

    surface = errors.mean(axis=2)
    best_score = surface.min()
    ties = np.argwhere(surface <= best_score + 1e-12)
    # ties: smallest lambda first, then smallest alpha
    a_idx, l_idx = min(ties.tolist(), key=lambda t: (lambdas[t[1]], alphas[t[0]]))
    return CvResult(
        best=PenaltySpec(kind=kind, lam=float(lambdas[l_idx]), alpha=float(alphas[a_idx])),
        lambdas=lambdas,
        alphas=alphas,
        surface=surface,
    )
