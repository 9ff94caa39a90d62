from __future__ import annotations

import datetime as dt

import pytest

from loopsift.clock import LogicalClock
from loopsift.store import Annotation, AnnotationKind, CorpusStore, Example, TargetGroup

EPOCH = dt.datetime(2019, 1, 1, tzinfo=dt.timezone.utc)


def ts(days: float = 0.0, seconds: float = 0.0) -> dt.datetime:
    return EPOCH + dt.timedelta(days=days, seconds=seconds)


def make_example(i: int, **overrides) -> Example:
    fields = {
        "id": f"ex-{i:05d}",
        "text": f"beispieltext nummer {i}",
        "source": "ON1",
        "language": "DE",
        "created_at": ts(seconds=i),
        "ingested_at": ts(seconds=i),
    }
    fields.update(overrides)
    return Example(**fields)


def make_annotation(
    example_id: str,
    annotator_id: str,
    label: int,
    *,
    toxic: bool = False,
    targets: frozenset[TargetGroup] = frozenset(),
    kind: AnnotationKind = AnnotationKind.STRONG,
    at: dt.datetime | None = None,
) -> Annotation:
    if label == 1 and not toxic and not targets:
        targets = frozenset({TargetGroup.NATIONALITY})
    return Annotation(
        example_id=example_id,
        annotator_id=annotator_id,
        label=label,
        toxic=toxic,
        targets=targets,
        kind=kind,
        created_at=at or ts(),
    )


@pytest.fixture
def clock() -> LogicalClock:
    return LogicalClock(EPOCH)


@pytest.fixture
def store(tmp_path, clock) -> CorpusStore:
    return CorpusStore(tmp_path / "store", clock=clock)
