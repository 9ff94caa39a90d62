"""Evaluation harness: metrics, splits, threshold bands, experiments."""

from .experiments import (
    CrossSliceResult,
    DriftReport,
    DriftRow,
    ExperimentDoc,
    IncrementalReport,
    ToxicPolicy,
    WeeklyBatch,
    cross_slice_experiment,
    default_trainer,
    incremental_experiment,
    temporal_drift_experiment,
    toxic_policy_experiment,
)
from .metrics import Metrics, compute_metrics, mean_metrics, std_metrics
from .reports import ReportFormat, emit_report
from .splits import stratified_split_8020
from .synth import (
    DRIFTED_SPEC,
    EXPERIMENT_SPEC,
    GroundTruth,
    SyntheticCorpus,
    SyntheticCorpusSpec,
    generate_synthetic_corpus,
)
from .threshold import (
    Band,
    ThresholdBandReport,
    compute_threshold_report,
    probability_bucket,
    round_half_up_pct,
)

__all__ = [
    "Band",
    "CrossSliceResult",
    "DriftReport",
    "DRIFTED_SPEC",
    "EXPERIMENT_SPEC",
    "DriftRow",
    "ExperimentDoc",
    "GroundTruth",
    "IncrementalReport",
    "Metrics",
    "ReportFormat",
    "SyntheticCorpus",
    "SyntheticCorpusSpec",
    "ThresholdBandReport",
    "ToxicPolicy",
    "WeeklyBatch",
    "compute_metrics",
    "compute_threshold_report",
    "cross_slice_experiment",
    "default_trainer",
    "emit_report",
    "generate_synthetic_corpus",
    "incremental_experiment",
    "mean_metrics",
    "probability_bucket",
    "round_half_up_pct",
    "std_metrics",
    "stratified_split_8020",
    "temporal_drift_experiment",
    "toxic_policy_experiment",
]
