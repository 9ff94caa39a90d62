"""Append-only corpus store.

Four JSONL files under one directory hold the full system state:
``examples.jsonl``, ``annotations.jsonl``, ``label_states.jsonl`` and
``snapshots.jsonl``.  Annotations and label-state records are never
rewritten; the current label state of an example is the last record for
its id.  An in-memory index is rebuilt on open.

Concurrency: one writer at a time.  All mutating and reading methods
take the same re-entrant lock, which serializes writers and keeps
readers consistent; returned records are immutable dataclasses, safe to
hand across threads.
"""

from __future__ import annotations

import datetime as dt
import threading
from dataclasses import replace
from pathlib import Path
from typing import Collection, Iterable, Mapping, Sequence

from ..clock import Clock, SystemClock, parse_utc
from ..errors import (
    DuplicateIdError,
    InvalidTimeRangeError,
    LoopsiftError,
    MissingQcAnnotationsError,
    UnbalancedInputError,
    UnknownExampleError,
)
from .jsonl import append_jsonl, dump_record, read_jsonl
from .models import (
    Annotation,
    AnnotationKind,
    Example,
    IngestReport,
    LabelState,
    Resolution,
    TrainingSnapshot,
)
from .resolve import resolve_annotations

EXAMPLES_FILE = "examples.jsonl"
ANNOTATIONS_FILE = "annotations.jsonl"
LABEL_STATES_FILE = "label_states.jsonl"
SNAPSHOTS_FILE = "snapshots.jsonl"

_LABEL_STATUS_VALUES = ("unlabeled", "weak", "strong")


class CorpusStore:
    def __init__(self, root: Path | str, clock: Clock | None = None):
        self.root = Path(root)
        self.root.mkdir(parents=True, exist_ok=True)
        self._clock: Clock = clock or SystemClock()
        self._lock = threading.RLock()
        self._examples: dict[str, Example] = {}
        self._annotations: list[Annotation] = []
        self._ann_index: dict[str, list[int]] = {}
        self._states: dict[str, LabelState] = {}
        self._snapshots: list[TrainingSnapshot] = []
        self._load()

    # --- loading ------------------------------------------------------------

    def _path(self, name: str) -> Path:
        return self.root / name

    def _load(self) -> None:
        for record in read_jsonl(self._path(EXAMPLES_FILE)):
            example = Example.from_record(record)
            self._examples[example.id] = example
        for record in read_jsonl(self._path(ANNOTATIONS_FILE)):
            annotation = Annotation.from_record(record)
            self._index_annotation(annotation)
        for record in read_jsonl(self._path(LABEL_STATES_FILE)):
            state = LabelState.from_record(record)
            self._states[state.example_id] = state
        for record in read_jsonl(self._path(SNAPSHOTS_FILE)):
            self._snapshots.append(TrainingSnapshot.from_record(record))

    def _index_annotation(self, annotation: Annotation) -> None:
        self._annotations.append(annotation)
        index = len(self._annotations) - 1
        self._ann_index.setdefault(annotation.example_id, []).append(index)

    # --- examples -----------------------------------------------------------

    def ingest_examples(self, batch: Iterable[Example | Mapping]) -> IngestReport:
        """Validate and persist a batch; per-item failures reject, not raise."""

        with self._lock:
            accepted: list[Example] = []
            rejected: list[tuple[str, str]] = []
            seen: set[str] = set()
            for item in batch:
                raw_id = str(item.id if isinstance(item, Example) else item.get("id", ""))
                try:
                    example = self._coerce_example(item)
                    if example.id in self._examples or example.id in seen:
                        raise DuplicateIdError(
                            f"example id already ingested: {example.id}",
                            id=example.id,
                        )
                except LoopsiftError as exc:
                    rejected.append((raw_id, exc.code))
                    continue
                seen.add(example.id)
                accepted.append(example)
            append_jsonl(
                self._path(EXAMPLES_FILE), (e.to_record() for e in accepted)
            )
            for example in accepted:
                self._examples[example.id] = example
            return IngestReport(accepted=len(accepted), rejected=tuple(rejected))

    def _coerce_example(self, item: Example | Mapping) -> Example:
        if isinstance(item, Example):
            item.validate()
            return item
        record = dict(item)
        if "ingested_at" not in record:
            record["ingested_at"] = self._clock.now()
        return Example.from_record(record)

    def has_example(self, example_id: str) -> bool:
        with self._lock:
            return example_id in self._examples

    def get_example(self, example_id: str) -> Example:
        with self._lock:
            try:
                return self._examples[example_id]
            except KeyError:
                raise UnknownExampleError(
                    f"unknown example id: {example_id}", id=example_id
                ) from None

    def example_ids(self) -> list[str]:
        with self._lock:
            return list(self._examples)

    def __len__(self) -> int:
        with self._lock:
            return len(self._examples)

    # --- annotations ----------------------------------------------------------

    def append_annotation(self, annotation: Annotation) -> str:
        with self._lock:
            annotation.validate()
            if annotation.example_id not in self._examples:
                raise UnknownExampleError(
                    f"unknown example id: {annotation.example_id}",
                    id=annotation.example_id,
                )
            append_jsonl(self._path(ANNOTATIONS_FILE), [annotation.to_record()])
            self._index_annotation(annotation)
            return f"ann-{len(self._annotations) - 1:08d}"

    def annotations_for(
        self, example_id: str, kind: AnnotationKind | None = None
    ) -> list[Annotation]:
        with self._lock:
            rows = [self._annotations[i] for i in self._ann_index.get(example_id, [])]
        if kind is not None:
            rows = [a for a in rows if a.kind is kind]
        return rows

    def all_annotations(self, kind: AnnotationKind | None = None) -> list[Annotation]:
        with self._lock:
            rows = list(self._annotations)
        if kind is not None:
            rows = [a for a in rows if a.kind is kind]
        return rows

    # --- label state ------------------------------------------------------------

    def label_state(self, example_id: str) -> LabelState:
        with self._lock:
            if example_id not in self._examples:
                raise UnknownExampleError(
                    f"unknown example id: {example_id}", id=example_id
                )
            return self._states.get(example_id, LabelState(example_id=example_id))

    def resolve_strong_label(
        self, example_id: str, exclude_annotators: Collection[str] = ()
    ) -> LabelState:
        """Aggregate this example's STRONG annotations into the label state.

        Annotations by `exclude_annotators` (e.g. reviewers rejected by a
        QC check) are left out of the resolution.
        """

        with self._lock:
            strong = self.annotations_for(example_id, AnnotationKind.STRONG)
            if exclude_annotators:
                excluded = set(exclude_annotators)
                strong = [a for a in strong if a.annotator_id not in excluded]
            resolved = resolve_annotations(example_id, strong)
            state = replace(
                self._states.get(example_id, LabelState(example_id=example_id)),
                strong_label=resolved.label,
                resolution=resolved.resolution,
            )
            self._write_state(state)
            return state

    def apply_qc_override(self, example_id: str) -> LabelState:
        """Let the latest QC annotation supersede the resolved strong label."""

        with self._lock:
            qc = self.annotations_for(example_id, AnnotationKind.QC)
            if not qc:
                raise MissingQcAnnotationsError(
                    f"no QC annotations for {example_id}", ids=[example_id]
                )
            latest = max(qc, key=lambda a: (a.created_at, a.annotator_id))
            state = replace(
                self._states.get(example_id, LabelState(example_id=example_id)),
                strong_label=latest.label,
                resolution=Resolution.QC_OVERRIDE,
            )
            self._write_state(state)
            return state

    def set_weak_labels(
        self, updates: Sequence[tuple[str, float, str]]
    ) -> int:
        """Record (example_id, probability, model_version) rows, all or nothing."""

        with self._lock:
            for example_id, _, _ in updates:
                if example_id not in self._examples:
                    raise UnknownExampleError(
                        f"unknown example id: {example_id}", id=example_id
                    )
            states = []
            for example_id, probability, model_version in updates:
                state = replace(
                    self._states.get(example_id, LabelState(example_id=example_id)),
                    weak_probability=probability,
                    weak_label=1 if probability >= 0.5 else 0,
                    model_version=model_version,
                )
                state.validate()
                states.append(state)
            append_jsonl(
                self._path(LABEL_STATES_FILE), (s.to_record() for s in states)
            )
            for state in states:
                self._states[state.example_id] = state
            return len(states)

    def _write_state(self, state: LabelState) -> None:
        append_jsonl(self._path(LABEL_STATES_FILE), [state.to_record()])
        self._states[state.example_id] = state

    def strong_label_map(self) -> dict[str, int]:
        with self._lock:
            return {
                example_id: state.strong_label
                for example_id, state in self._states.items()
                if state.strong_label is not None
            }

    # --- snapshots ----------------------------------------------------------

    def snapshot_training_set(self, balanced_ids: Sequence[str]) -> TrainingSnapshot:
        with self._lock:
            ids = list(balanced_ids)
            if len(set(ids)) != len(ids):
                raise UnbalancedInputError("duplicate ids in snapshot input")
            unknown = [i for i in ids if i not in self._examples]
            if unknown:
                raise UnknownExampleError(
                    f"unknown example ids: {unknown[:5]}", ids=unknown
                )
            labels = []
            unlabeled = []
            for example_id in ids:
                state = self._states.get(example_id)
                if state is None or state.strong_label is None:
                    unlabeled.append(example_id)
                else:
                    labels.append(state.strong_label)
            if unlabeled:
                raise UnbalancedInputError(
                    f"ids without strong labels: {unlabeled[:5]}", ids=unlabeled
                )
            positives = sum(labels)
            negatives = len(labels) - positives
            if positives != negatives:
                raise UnbalancedInputError(
                    f"positives={positives} negatives={negatives}",
                    positives=positives,
                    negatives=negatives,
                )
            version = self._snapshots[-1].version + 1 if self._snapshots else 1
            snapshot = TrainingSnapshot(
                version=version,
                example_ids=tuple(ids),
                positives=positives,
                negatives=negatives,
                created_at=self._clock.now(),
                parent_version=self._snapshots[-1].version
                if self._snapshots
                else None,
            )
            append_jsonl(self._path(SNAPSHOTS_FILE), [snapshot.to_record()])
            self._snapshots.append(snapshot)
            return snapshot

    def snapshots(self) -> list[TrainingSnapshot]:
        with self._lock:
            return list(self._snapshots)

    def latest_snapshot(self) -> TrainingSnapshot | None:
        with self._lock:
            return self._snapshots[-1] if self._snapshots else None

    # --- queries ------------------------------------------------------------

    def query_examples(
        self,
        source: str | None = None,
        language: str | None = None,
        time_range: tuple[object, object] | None = None,
        label_status: str | None = None,
    ) -> list[tuple[Example, LabelState]]:
        """Filtered view, ordered by (created_at asc, id asc)."""

        bounds: tuple[dt.datetime, dt.datetime] | None = None
        if time_range is not None:
            bounds = (_as_instant(time_range[0]), _as_instant(time_range[1]))
            if bounds[0] > bounds[1]:
                raise InvalidTimeRangeError(
                    f"time range start after end: {time_range}"
                )
        if label_status is not None:
            label_status = label_status.lower()
            if label_status not in _LABEL_STATUS_VALUES:
                raise InvalidTimeRangeError(
                    f"label_status must be one of {_LABEL_STATUS_VALUES}"
                )

        with self._lock:
            rows = []
            for example in self._examples.values():
                if source is not None and example.source != source:
                    continue
                if language is not None and example.language != language:
                    continue
                if bounds is not None and not (
                    bounds[0] <= example.created_at <= bounds[1]
                ):
                    continue
                state = self._states.get(
                    example.id, LabelState(example_id=example.id)
                )
                if label_status == "unlabeled" and (
                    state.weak_label is not None or state.strong_label is not None
                ):
                    continue
                if label_status == "weak" and (
                    state.weak_label is None or state.strong_label is not None
                ):
                    continue
                if label_status == "strong" and state.strong_label is None:
                    continue
                rows.append((example, state))
        rows.sort(key=lambda pair: (pair[0].created_at, pair[0].id))
        return rows

    # --- export -------------------------------------------------------------

    def export_to(self, dest: Path | str) -> dict[str, int]:
        """Rewrite the store's four files under ``dest``; returns line counts."""

        dest_path = Path(dest)
        dest_path.mkdir(parents=True, exist_ok=True)
        with self._lock:
            plan = {
                EXAMPLES_FILE: [e.to_record() for e in self._examples.values()],
                ANNOTATIONS_FILE: [a.to_record() for a in self._annotations],
                LABEL_STATES_FILE: [s.to_record() for s in self._states.values()],
                SNAPSHOTS_FILE: [s.to_record() for s in self._snapshots],
            }
        counts = {}
        for name, records in plan.items():
            target = dest_path / name
            lines = [dump_record(r) for r in records]
            target.write_text(
                "\n".join(lines) + "\n" if lines else "", encoding="utf-8"
            )
            counts[name] = len(lines)
        return counts


def _as_instant(value: object) -> dt.datetime:
    if isinstance(value, dt.datetime):
        if value.tzinfo is None:
            value = value.replace(tzinfo=dt.timezone.utc)
        return value.astimezone(dt.timezone.utc)
    if isinstance(value, str):
        try:
            return parse_utc(value)
        except ValueError as exc:
            raise InvalidTimeRangeError(f"bad time bound: {value!r}") from exc
    raise InvalidTimeRangeError(f"bad time bound: {value!r}")
