"""The review-and-retrain cycle: one wave of the human-in-the-loop.

A wave runs seven steps over a corpus store:

1. score    - refresh weak labels on everything lacking a strong label
2. queue    - order candidates and cut per-annotator slices (shared QC set)
3. annotate - collect one strong annotation per assigned item
4. tiebreak - fetch a third opinion where two reviewers split
5. qc       - compute the overlap report and collect an accept/reject call
6. merge    - resolve strong labels, grow the balanced snapshot
7. retrain  - fit on the snapshot, hold out 20 percent, record metrics

Progress lives in a JSON state file next to the trained models, written
atomically after each step, so an interrupted wave resumes where it
stopped and a finished wave is never re-run.  Step 6 is blocked until the
QC decision from step 5 exists; slices of rejected annotators are left
out of the merge and their items return to the pool for the next wave.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Mapping, Sequence

from ..clock import Clock, SystemClock
from ..errors import (
    EmptyClassError,
    EmptyCorpusError,
    PendingQcError,
    SingleClassError,
    TooFewPerClassError,
    UnresolvedTieError,
)
from ..evalharness.metrics import Metrics, compute_metrics
from ..evalharness.splits import stratified_split_8020
from ..mnb.features import FeatureConfig
from ..mnb.model import fit_text_model, load_model, predict_proba, save_model
from ..quality.qc import QcReport, qc_overlap_report
from ..store.models import Annotation, AnnotationKind, Example
from ..store.store import CorpusStore
from ..textprep import full_tokens
from .balance import balance_5050
from .queue import DEFAULT_QC_COUNT, DEFAULT_SLICE_SIZE, build_annotation_queue
from .weak import generate_weak_labels

STEPS = ("score", "queue", "annotate", "tiebreak", "qc", "merge", "retrain")

# fn(example) -> (label, toxic, targets)
AnnotateFn = Callable[[Example], tuple[int, bool, tuple]]
# fn(report) -> annotator ids whose slices must be rejected
QcReviewFn = Callable[[QcReport], Sequence[str]]


@dataclass(frozen=True, slots=True)
class CycleConfig:
    slice_size: int = DEFAULT_SLICE_SIZE
    qc_count: int = DEFAULT_QC_COUNT
    qc_floor: float = 0.6
    seed: int = 0
    feature_config: FeatureConfig | None = None
    smoothing_alpha: float = 1.0
    default_language: str = "DE"


@dataclass(frozen=True, slots=True)
class CycleResult:
    wave: int
    steps_done: tuple[str, ...]
    n_scored: int
    n_queued: int
    n_annotated: int
    n_resolved: int
    n_returned: int
    rejected_annotators: tuple[str, ...]
    snapshot_version: int | None
    model_version: str | None
    metrics: Metrics | None

    def to_record(self) -> dict:
        return {
            "wave": self.wave,
            "steps_done": list(self.steps_done),
            "n_scored": self.n_scored,
            "n_queued": self.n_queued,
            "n_annotated": self.n_annotated,
            "n_resolved": self.n_resolved,
            "n_returned": self.n_returned,
            "rejected_annotators": list(self.rejected_annotators),
            "snapshot_version": self.snapshot_version,
            "model_version": self.model_version,
            "metrics": self.metrics.to_record() if self.metrics else None,
        }


def _empty_state() -> dict:
    return {
        "completed": [],
        "current": None,
        "active_model_path": None,
        "rejected_annotators_all": [],
    }


def load_cycle_state(state_path: Path | str) -> dict:
    path = Path(state_path)
    if not path.exists():
        return _empty_state()
    return json.loads(path.read_text(encoding="utf-8"))


def _save_state(state_path: Path, state: dict) -> None:
    tmp = state_path.with_suffix(".tmp")
    tmp.write_text(json.dumps(state, indent=2) + "\n", encoding="utf-8")
    os.replace(tmp, state_path)


def record_qc_decision(
    state_path: Path | str, rejected_annotators: Sequence[str]
) -> None:
    """Store the human accept/reject call for a wave blocked on QC."""

    path = Path(state_path)
    state = load_cycle_state(path)
    current = state.get("current")
    if not current or "qc" not in current["done"]:
        raise PendingQcError("no wave is waiting on a QC decision")
    known = set(current["slices"])
    unknown = [a for a in rejected_annotators if a not in known]
    if unknown:
        raise ValueError(f"unknown annotators: {unknown}")
    current["qc_rejected"] = sorted(rejected_annotators)
    _save_state(path, state)


def run_cycle(
    store: CorpusStore,
    state_path: Path | str,
    annotators: Mapping[str, AnnotateFn],
    *,
    config: CycleConfig | None = None,
    clock: Clock | None = None,
    qc_reviewer: QcReviewFn | None = None,
) -> CycleResult:
    """Run (or resume) one wave; raises PendingQcError when blocked."""

    if not annotators:
        raise ValueError("at least one annotator is required")
    config = config or CycleConfig()
    clock = clock or SystemClock()
    path = Path(state_path)
    path.parent.mkdir(parents=True, exist_ok=True)
    state = load_cycle_state(path)

    if state["current"] is None:
        state["current"] = {
            "wave": len(state["completed"]) + 1,
            "done": [],
            "n_scored": 0,
            "queue": [],
            "qc_ids": [],
            "slices": {},
            "qc_report": None,
            "qc_rejected": None,
            "resolved": [],
            "returned": [],
            "snapshot_version": None,
            "model_version": None,
            "metrics": None,
        }
        _save_state(path, state)
    current = state["current"]
    wave = current["wave"]
    wave_seed = config.seed * 1_000_003 + wave
    missing_annotators = set(current["slices"]) - set(annotators)
    if missing_annotators:
        raise ValueError(
            f"resuming wave {wave} requires its original annotators; "
            f"missing: {sorted(missing_annotators)}"
        )

    def done(step: str) -> bool:
        return step in current["done"]

    def mark(step: str) -> None:
        current["done"].append(step)
        _save_state(path, state)

    # 1. score: refresh weak labels with the active model, if any
    if not done("score"):
        scorer = _active_scorer(state, config)
        if scorer is not None:
            scored = generate_weak_labels(store, scorer)
            current["n_scored"] = len(scored)
        mark("score")

    # 2. queue: order the unreviewed pool, cut slices with a shared QC set
    if not done("queue"):
        candidates = [
            (example.id,
             label.weak_probability if label.weak_probability is not None else 0.5)
            for example, label in store.query_examples()
            if label.strong_label is None
        ]
        # late waves may leave fewer unreviewed items than the QC quota
        queue = build_annotation_queue(
            candidates,
            slice_size=config.slice_size,
            qc_count=min(config.qc_count, len(candidates), config.slice_size),
            n_annotators=len(annotators),
            seed=wave_seed,
        )
        names = sorted(annotators)
        current["queue"] = [[i, p] for i, p in queue.items]
        current["qc_ids"] = list(queue.qc_ids)
        current["slices"] = {
            name: list(chunk) for name, chunk in zip(names, queue.slices)
        }
        mark("queue")

    # 3. annotate: one strong judgment per assigned item, skip what exists
    if not done("annotate"):
        for name in sorted(current["slices"]):
            annotate = annotators[name]
            for example_id in current["slices"][name]:
                if any(
                    a.annotator_id == name
                    for a in store.annotations_for(
                        example_id, AnnotationKind.STRONG
                    )
                ):
                    continue
                example = store.get_example(example_id)
                label, toxic, targets = annotate(example)
                store.append_annotation(
                    Annotation(
                        example_id=example_id,
                        annotator_id=name,
                        label=label,
                        toxic=toxic,
                        targets=frozenset(targets),
                        kind=AnnotationKind.STRONG,
                        created_at=clock.now(),
                    )
                )
        mark("annotate")

    # 4. tiebreak: a third opinion wherever exactly two reviewers split
    if not done("tiebreak"):
        names = sorted(current["slices"])
        in_play = sorted(
            {i for chunk in current["slices"].values() for i in chunk}
        )
        for example_id in in_play:
            rows = store.annotations_for(example_id, AnnotationKind.STRONG)
            by_annotator = {a.annotator_id: a for a in rows}
            if len(by_annotator) != 2:
                continue
            first, second = sorted(
                by_annotator.values(),
                key=lambda a: (a.created_at, a.annotator_id),
            )
            if first.label == second.label:
                continue
            third = next(
                (n for n in names if n not in by_annotator), None
            )
            if third is None:
                continue  # unresolvable; merge will return it to the pool
            example = store.get_example(example_id)
            label, toxic, targets = annotators[third](example)
            store.append_annotation(
                Annotation(
                    example_id=example_id,
                    annotator_id=third,
                    label=label,
                    toxic=toxic,
                    targets=frozenset(targets),
                    kind=AnnotationKind.STRONG,
                    created_at=clock.now(),
                )
            )
        mark("tiebreak")

    # 5. qc: overlap report, then an accept/reject decision
    if not done("qc"):
        names = sorted(current["slices"])
        if len(names) >= 2 and current["qc_ids"]:
            qc_set = set(current["qc_ids"])
            answers: dict[str, dict[str, int]] = {name: {} for name in names}
            for row in store.all_annotations(AnnotationKind.STRONG):
                if row.annotator_id in answers and row.example_id in qc_set:
                    answers[row.annotator_id][row.example_id] = row.label
            report = qc_overlap_report(
                answers, current["qc_ids"], floor=config.qc_floor
            )
            current["qc_report"] = report.to_record()
            if qc_reviewer is not None:
                current["qc_rejected"] = sorted(qc_reviewer(report))
            elif not report.flagged:
                current["qc_rejected"] = []
        else:
            # single reviewer or no QC items: nothing to cross-check
            current["qc_report"] = None
            current["qc_rejected"] = []
        mark("qc")

    if current["qc_rejected"] is None:
        if qc_reviewer is not None:
            report = _report_from_record(current["qc_report"])
            current["qc_rejected"] = sorted(qc_reviewer(report))
            _save_state(path, state)
        else:
            _save_state(path, state)
            raise PendingQcError(
                f"wave {wave} needs a QC decision for flagged annotators: "
                f"{current['qc_report']['flagged']}"
            )

    # 6. merge: resolve labels, return unusable items, grow the snapshot
    if not done("merge"):
        rejected = set(current["qc_rejected"])
        state["rejected_annotators_all"] = sorted(
            set(state["rejected_annotators_all"]) | rejected
        )
        excluded = set(state["rejected_annotators_all"])
        accepted_items: set[str] = set(current["qc_ids"])
        for name, chunk in current["slices"].items():
            if name in rejected:
                continue
            accepted_items.update(chunk)
        returned: list[str] = []
        resolved: list[str] = []
        qc_set = set(current["qc_ids"])
        for name, chunk in current["slices"].items():
            if name not in rejected:
                continue
            returned.extend(
                i for i in chunk if i not in qc_set and i not in accepted_items
            )
        for example_id in sorted(accepted_items):
            try:
                store.resolve_strong_label(
                    example_id, exclude_annotators=excluded
                )
                resolved.append(example_id)
            except (UnresolvedTieError, ValueError):
                returned.append(example_id)
        current["resolved"] = sorted(resolved)
        current["returned"] = sorted(set(returned))

        previous = store.latest_snapshot()
        previous_ids = set(previous.example_ids) if previous else set()
        strong = store.strong_label_map()
        new_pos = [i for i in sorted(strong) if strong[i] == 1
                   and i not in previous_ids]
        new_neg = [i for i in sorted(strong) if strong[i] == 0
                   and i not in previous_ids]
        try:
            additions = balance_5050(new_pos, new_neg, seed=wave_seed)
            snapshot_ids = (
                list(previous.example_ids) if previous else []
            ) + list(additions)
            snapshot = store.snapshot_training_set(snapshot_ids)
            current["snapshot_version"] = snapshot.version
        except EmptyClassError:
            current["snapshot_version"] = None
        mark("merge")

    # 7. retrain: fit on the snapshot, hold out 20 percent, record metrics
    if not done("retrain"):
        snapshot = store.latest_snapshot()
        if snapshot is not None:
            ids = list(snapshot.example_ids)
            strong = store.strong_label_map()
            labels = [strong[i] for i in ids]
            corpus = []
            for example_id in ids:
                example = store.get_example(example_id)
                corpus.append(full_tokens(example.text, example.language))
            version = f"v{snapshot.version}"
            try:
                train_idx, eval_idx = stratified_split_8020(labels, wave_seed)
                model = fit_text_model(
                    [corpus[i] for i in train_idx],
                    [labels[i] for i in train_idx],
                    cfg=config.feature_config,
                    alpha=config.smoothing_alpha,
                    version=version,
                )
                y_true = [labels[i] for i in eval_idx]
                y_pred = [
                    predict_proba(model, corpus[i]).label for i in eval_idx
                ]
                metrics = compute_metrics(y_true, y_pred)
                model_path = path.parent / f"model-{version}.json"
                save_model(model, model_path)
                state["active_model_path"] = str(model_path)
                current["model_version"] = version
                current["metrics"] = metrics.to_record()
            except (SingleClassError, EmptyCorpusError, TooFewPerClassError):
                current["model_version"] = None
                current["metrics"] = None
        mark("retrain")

    result = CycleResult(
        wave=wave,
        steps_done=tuple(current["done"]),
        n_scored=current["n_scored"],
        n_queued=len(current["queue"]),
        n_annotated=sum(len(c) for c in current["slices"].values()),
        n_resolved=len(current["resolved"]),
        n_returned=len(current["returned"]),
        rejected_annotators=tuple(current["qc_rejected"]),
        snapshot_version=current["snapshot_version"],
        model_version=current["model_version"],
        metrics=_metrics_from_record(current["metrics"]),
    )
    state["completed"].append(current)
    state["current"] = None
    _save_state(path, state)
    return result


def _active_scorer(state: dict, config: CycleConfig):
    model_path = state.get("active_model_path")
    if not model_path or not Path(model_path).exists():
        return None
    from ..scorer import MnbScorer

    return MnbScorer(load_model(model_path), config.default_language)


def _metrics_from_record(record: dict | None) -> Metrics | None:
    if record is None:
        return None
    return Metrics(
        precision=record["precision"],
        recall=record["recall"],
        weighted_f1=record["weighted_f1"],
        support_pos=record["support_pos"],
        support_neg=record["support_neg"],
    )


def _report_from_record(record: dict) -> QcReport:
    from ..quality.alpha import ReliabilityReport

    reliability = record["reliability"]
    pair_agreement = {}
    for key, rate in record["pair_agreement"].items():
        a, b = key.split("|", 1)
        pair_agreement[(a, b)] = rate
    return QcReport(
        floor=record["floor"],
        pair_agreement=pair_agreement,
        majority_agreement=dict(record["majority_agreement"]),
        reliability=ReliabilityReport(
            alpha=reliability["alpha"],
            n_items=reliability["n_items"],
            n_annotators=reliability["n_annotators"],
            n_pairable=reliability["n_pairable"],
            degenerate=reliability["degenerate"],
        ),
        flagged=tuple(record["flagged"]),
    )
