"""Inter-annotator reliability and QC overlap checks."""

from .alpha import ReliabilityReport, krippendorff_alpha
from .qc import QcReport, qc_overlap_report

__all__ = [
    "QcReport",
    "ReliabilityReport",
    "krippendorff_alpha",
    "qc_overlap_report",
]
