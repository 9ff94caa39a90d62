from .models import (
    Annotation,
    AnnotationKind,
    Example,
    IngestReport,
    KNOWN_LANGUAGES,
    KNOWN_SOURCES,
    LabelState,
    Resolution,
    TARGET_ORDER,
    TargetGroup,
    TrainingSnapshot,
)
from .resolve import ResolvedLabel, resolve_annotations
from .store import CorpusStore

__all__ = [
    "Annotation",
    "AnnotationKind",
    "CorpusStore",
    "Example",
    "IngestReport",
    "KNOWN_LANGUAGES",
    "KNOWN_SOURCES",
    "LabelState",
    "ResolvedLabel",
    "Resolution",
    "TARGET_ORDER",
    "TargetGroup",
    "TrainingSnapshot",
    "resolve_annotations",
]
