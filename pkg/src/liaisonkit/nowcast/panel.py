"""Quarterly feature panel and design-matrix construction.

Every column carries an availability flag: variables whose current-quarter
value is unknown at nowcast time enter the design only at lag one.  Current
variables contribute both the contemporaneous value and (optionally) the lag.
The first panel row is consumed by lagging, so usable design rows start at
the second quarter.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Mapping, Sequence

import numpy as np

from ..errors import MissingDataError, ProtocolError, ValidationError
from ..periods import quarter_index

BLOCKS = ("baseline", "staff", "text")


@dataclass(frozen=True)
class ColumnSpec:
    name: str
    block: str = "text"
    available_current: bool = True
    include_lag: bool = True

    def __post_init__(self):
        if self.block not in BLOCKS:
            raise ValidationError(f"{self.name}: unknown block {self.block!r}")


@dataclass
class FeaturePanel:
    quarters: list[str]
    target: np.ndarray
    columns: dict[str, np.ndarray]
    specs: dict[str, ColumnSpec]
    target_name: str = "wpi_growth"

    def validate(self) -> None:
        n = len(self.quarters)
        idx = [quarter_index(q) for q in self.quarters]
        if any(b - a != 1 for a, b in zip(idx, idx[1:])):
            raise ValidationError("panel quarters must be consecutive")
        bad = []
        if self.target.shape != (n,) or np.isnan(self.target).any():
            bad.append(self.target_name)
        for name, col in self.columns.items():
            if col.shape != (n,) or np.isnan(col).any():
                bad.append(name)
        if bad:
            raise MissingDataError(f"missing cells in panel columns: {bad}", columns=bad)
        unknown = [name for name in self.columns if name not in self.specs]
        if unknown:
            raise ValidationError(f"columns without specs: {unknown}")


@dataclass
class DesignMatrix:
    quarters: list[str]      # aligned with rows (panel quarters minus the first)
    names: tuple[str, ...]
    blocks: tuple[str, ...]  # block per design column
    X: np.ndarray
    y: np.ndarray

    def column_indices(self, block: str | None = None) -> np.ndarray:
        if block is None:
            return np.arange(len(self.names))
        return np.array([i for i, b in enumerate(self.blocks) if b == block], dtype=int)


def design_matrix(panel: FeaturePanel) -> DesignMatrix:
    """Expand panel columns into current/lagged design columns."""
    panel.validate()
    names: list[str] = []
    blocks: list[str] = []
    cols: list[np.ndarray] = []
    for name in panel.columns:
        spec = panel.specs[name]
        series = panel.columns[name]
        if spec.available_current:
            names.append(name)
            blocks.append(spec.block)
            cols.append(series[1:])
            if spec.include_lag:
                names.append(f"{name}_lag1")
                blocks.append(spec.block)
                cols.append(series[:-1])
        else:
            names.append(f"{name}_lag1")
            blocks.append(spec.block)
            cols.append(series[:-1])
    X = np.column_stack(cols) if cols else np.empty((len(panel.quarters) - 1, 0))
    return DesignMatrix(
        quarters=list(panel.quarters[1:]),
        names=tuple(names),
        blocks=tuple(blocks),
        X=X,
        y=panel.target[1:].copy(),
    )


# --- feature assembly ----------------------------------------------------------

@dataclass(frozen=True)
class FeatureDef:
    """One panel column: where it comes from and how it enters the design."""

    name: str
    source: str                      # "indicator" | "macro" | "interaction"
    key: str | tuple[str, str] = ""  # series key, or the two interacted columns
    block: str = "text"
    available_current: bool = True
    include_lag: bool = True


def assemble_features(
    indicators: Mapping[str, Mapping[str, float]],
    macro: Mapping[str, Mapping[str, float]],
    features: Sequence[FeatureDef],
    target_key: str = "wpi_growth",
    quarters: Sequence[str] | None = None,
) -> FeaturePanel:
    """Align sources on the panel span and build interaction columns.

    `indicators` and `macro` map series name -> {quarter -> value}.  The span
    defaults to the target's quarters; any source missing a quarter inside the
    span aborts with the offending column names.
    """
    if target_key not in macro:
        raise MissingDataError(f"macro inputs lack target {target_key!r}", columns=[target_key])
    span = sorted(quarters if quarters is not None else macro[target_key], key=quarter_index)
    if not span:
        raise MissingDataError("empty panel span", columns=[target_key])

    def pull(source: Mapping[str, float], name: str) -> np.ndarray:
        missing = [q for q in span if q not in source]
        if missing:
            raise MissingDataError(
                f"column {name!r} missing quarters {missing[:4]}", columns=[name]
            )
        return np.array([source[q] for q in span], dtype=float)

    target = pull(macro[target_key], target_key)
    columns: dict[str, np.ndarray] = {}
    specs: dict[str, ColumnSpec] = {}
    plain = [f for f in features if f.source != "interaction"]
    interactions = [f for f in features if f.source == "interaction"]
    for f in plain:
        pool = indicators if f.source == "indicator" else macro
        key = f.key or f.name
        if key not in pool:
            raise MissingDataError(f"unknown {f.source} series {key!r}", columns=[f.name])
        columns[f.name] = pull(pool[key], f.name)
        specs[f.name] = ColumnSpec(f.name, f.block, f.available_current, f.include_lag)
    for f in interactions:
        a, b = f.key
        if a not in columns or b not in columns:
            raise MissingDataError(
                f"interaction {f.name!r} references unknown columns {f.key}", columns=[f.name]
            )
        columns[f.name] = _standardized(columns[a]) * _standardized(columns[b])
        specs[f.name] = ColumnSpec(f.name, f.block, f.available_current, f.include_lag)
    panel = FeaturePanel(
        quarters=list(span), target=target, columns=columns, specs=specs, target_name=target_key
    )
    panel.validate()
    return panel


def _standardized(values: np.ndarray) -> np.ndarray:
    sd = values.std(ddof=1)
    if sd == 0:
        raise ValidationError("interaction input has zero variance")
    return (values - values.mean()) / sd


def read_macro_csv(path: str | Path) -> dict[str, dict[str, float]]:
    """Macro inputs: CSV with a `quarter` column and one column per series."""
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None or "quarter" not in reader.fieldnames:
            raise ValidationError("macro CSV needs a 'quarter' column")
        series = {name: {} for name in reader.fieldnames if name != "quarter"}
        for row in reader:
            for name in series:
                if row[name] != "":
                    series[name][row["quarter"]] = float(row[name])
    return series


def write_macro_csv(macro: Mapping[str, Mapping[str, float]], path: str | Path) -> None:
    names = sorted(macro)
    quarters = sorted({q for s in macro.values() for q in s}, key=quarter_index)
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["quarter"] + names)
        for q in quarters:
            writer.writerow([q] + [repr(float(macro[n][q])) if q in macro[n] else "" for n in names])


# --- CSV / schema round trip ----------------------------------------------------

def write_panel_csv(panel: FeaturePanel, csv_path: str | Path, schema_path: str | Path) -> None:
    names = list(panel.columns)
    with open(csv_path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["quarter", panel.target_name] + names)
        for i, q in enumerate(panel.quarters):
            writer.writerow(
                [q, repr(float(panel.target[i]))] + [repr(float(panel.columns[n][i])) for n in names]
            )
    schema = {
        "target": panel.target_name,
        "columns": {
            name: {
                "block": spec.block,
                "available_current": spec.available_current,
                "include_lag": spec.include_lag,
            }
            for name, spec in panel.specs.items()
        },
    }
    with open(schema_path, "w", encoding="utf-8") as fh:
        json.dump(schema, fh, indent=2)
        fh.write("\n")


def read_panel_csv(csv_path: str | Path, schema_path: str | Path) -> FeaturePanel:
    with open(schema_path, encoding="utf-8") as fh:
        schema = json.load(fh)
    target_name = schema["target"]
    with open(csv_path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None or "quarter" not in reader.fieldnames:
            raise ValidationError("panel CSV needs a 'quarter' column")
        if target_name not in reader.fieldnames:
            raise MissingDataError(
                f"panel CSV lacks target column {target_name!r}", columns=[target_name]
            )
        rows = list(reader)
    quarters = [r["quarter"] for r in rows]
    target = np.array([float(r[target_name]) for r in rows])
    columns = {}
    specs = {}
    for name, meta in schema["columns"].items():
        if name not in rows[0]:
            raise MissingDataError(f"panel CSV lacks column {name!r}", columns=[name])
        columns[name] = np.array([float(r[name]) for r in rows])
        specs[name] = ColumnSpec(
            name,
            meta.get("block", "text"),
            bool(meta.get("available_current", True)),
            bool(meta.get("include_lag", True)),
        )
    panel = FeaturePanel(
        quarters=quarters, target=target, columns=columns, specs=specs, target_name=target_name
    )
    panel.validate()
    return panel
