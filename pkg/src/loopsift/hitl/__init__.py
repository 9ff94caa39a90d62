"""Human-in-the-loop annotation cycle: queues, balancing, retrain policy."""

from .balance import balance_5050
from .policy import RetrainPolicy, TriggerMode, check_retrain_trigger
from .queue import (
    DEFAULT_QC_COUNT,
    DEFAULT_SLICE_SIZE,
    AnnotationQueue,
    build_annotation_queue,
    order_candidates,
)
from .weak import generate_weak_labels
from .annotator import SimulatedAnnotator
from .cycle import (
    STEPS,
    CycleConfig,
    CycleResult,
    load_cycle_state,
    record_qc_decision,
    run_cycle,
)

__all__ = [
    "AnnotationQueue",
    "CycleConfig",
    "CycleResult",
    "DEFAULT_QC_COUNT",
    "DEFAULT_SLICE_SIZE",
    "RetrainPolicy",
    "STEPS",
    "SimulatedAnnotator",
    "TriggerMode",
    "balance_5050",
    "build_annotation_queue",
    "check_retrain_trigger",
    "generate_weak_labels",
    "load_cycle_state",
    "order_candidates",
    "record_qc_decision",
    "run_cycle",
]
