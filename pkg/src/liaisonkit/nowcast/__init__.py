"""Shrinkage-regression nowcasting: solvers, CV, backtest, DM comparison."""

from .backtest import (
    BASELINE_MODEL,
    BacktestResult,
    ModelSpec,
    NowcastRecord,
    Protocol,
    run_backtest,
    selection_frequency,
    selection_frequency_csv,
)
from .cv import ALPHA_GRID, LAMBDA_GRID, CvResult, cv_select, fold_eval_indices, grid_for
from .dm import DmResult, dm_test
from .features import default_feature_defs, indicator_inputs_from_snapshot, panel_from_snapshot
from .panel import (
    ColumnSpec,
    DesignMatrix,
    FeatureDef,
    FeaturePanel,
    assemble_features,
    design_matrix,
    read_panel_csv,
    write_panel_csv,
)
from .solvers import (
    CoefficientVector,
    PenaltySpec,
    fit_linear,
    fit_penalized,
    kkt_violation,
    lasso_null_lambda,
    ridge_closed_form,
    solve_path,
    warmup,
)
from .synthdgp import planted_sparse_panel, synthetic_macro

__all__ = [
    "BASELINE_MODEL", "BacktestResult", "ModelSpec", "NowcastRecord", "Protocol",
    "run_backtest", "selection_frequency", "selection_frequency_csv",
    "ALPHA_GRID", "LAMBDA_GRID", "CvResult", "cv_select", "fold_eval_indices", "grid_for",
    "DmResult", "dm_test",
    "default_feature_defs", "indicator_inputs_from_snapshot", "panel_from_snapshot",
    "ColumnSpec", "DesignMatrix", "FeatureDef", "FeaturePanel",
    "assemble_features", "design_matrix", "read_panel_csv", "write_panel_csv",
    "CoefficientVector", "PenaltySpec", "fit_linear", "fit_penalized",
    "kkt_violation", "lasso_null_lambda", "ridge_closed_form", "solve_path", "warmup",
    "planted_sparse_panel", "synthetic_macro",
]
