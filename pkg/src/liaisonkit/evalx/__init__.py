"""Classifier evaluation, stratified sampling, simulation and series validation."""

from .metrics import (
    LabelledItem,
    LabelledSample,
    MetricReport,
    consensus_from_annotations,
    prf1,
    read_annotation_csv,
    spot_check_precision,
    stratum_weighted_f1,
)
from .sampling import stratified_sample, stratum_of
from .simulation import SimConfig, SimulationReport, run_sampling_simulation
from .validation import (
    correlation_profile,
    extraction_error_report,
    granger_bidirectional,
    granger_test,
)

__all__ = [
    "LabelledItem", "LabelledSample", "MetricReport",
    "consensus_from_annotations", "prf1", "read_annotation_csv",
    "spot_check_precision", "stratum_weighted_f1",
    "stratified_sample", "stratum_of",
    "SimConfig", "SimulationReport", "run_sampling_simulation",
    "correlation_profile", "extraction_error_report",
    "granger_bidirectional", "granger_test",
]
