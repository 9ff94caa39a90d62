"""Offline experiment runners over preprocessed, truth-labeled documents.

All runners share the same shape: pick a training population, split or
hold out deterministically, fit a classifier, and score predictions
against ground-truth labels.  A custom trainer can be injected; the
default fits the bundled Naive Bayes classifier.
"""

from __future__ import annotations

from dataclasses import dataclass
from datetime import datetime
from enum import Enum
from typing import Callable, Mapping, Sequence

from ..errors import (
    EmptyClassError,
    EmptyCorpusError,
    EmptySideError,
    EmptySliceError,
    NoToxicExamplesError,
    SingleClassError,
    TooFewPerClassError,
)
from ..hitl.balance import balance_5050
from ..mnb.features import FeatureConfig
from ..mnb.model import fit_text_model, predict_proba
from .metrics import Metrics, compute_metrics
from .splits import stratified_split_8020

ScoreFn = Callable[[Sequence[str]], float]
TrainerFn = Callable[[Sequence[Sequence[str]], Sequence[int]], ScoreFn]


@dataclass(frozen=True, slots=True)
class ExperimentDoc:
    id: str
    tokens: tuple[str, ...]
    label: int
    toxic: bool
    source: str
    language: str
    created_at: datetime
    week: int


def default_trainer(
    cfg: FeatureConfig | None = None, alpha: float = 1.0
) -> TrainerFn:
    def trainer(corpus: Sequence[Sequence[str]], labels: Sequence[int]) -> ScoreFn:
        model = fit_text_model(corpus, labels, cfg=cfg, alpha=alpha)
        return lambda tokens: predict_proba(model, tokens).probability

    return trainer


def _evaluate(score: ScoreFn, docs: Sequence[ExperimentDoc]) -> Metrics:
    y_true = [doc.label for doc in docs]
    y_pred = [1 if score(doc.tokens) >= 0.5 else 0 for doc in docs]
    return compute_metrics(y_true, y_pred)


def _split(
    docs: Sequence[ExperimentDoc], labels: Sequence[int], seed: int
) -> tuple[list[ExperimentDoc], list[int], list[ExperimentDoc]]:
    train_idx, eval_idx = stratified_split_8020(labels, seed)
    train_docs = [docs[i] for i in train_idx]
    train_labels = [labels[i] for i in train_idx]
    eval_docs = [docs[i] for i in eval_idx]
    return train_docs, train_labels, eval_docs


# --- weekly incremental retraining ------------------------------------------


@dataclass(frozen=True, slots=True)
class WeeklyBatch:
    week: int
    pool_size: int
    train_size: int
    eval_size: int
    status: str  # "OK", or "OF" when the week's pool was not trainable
    metrics: Metrics | None
    baseline_f1: float | None

    def to_record(self) -> dict:
        return {
            "week": self.week,
            "pool_size": self.pool_size,
            "train_size": self.train_size,
            "eval_size": self.eval_size,
            "status": self.status,
            "metrics": self.metrics.to_record() if self.metrics else None,
            "baseline_f1": self.baseline_f1,
        }


@dataclass(frozen=True, slots=True)
class IncrementalReport:
    rows: tuple[WeeklyBatch, ...]

    def to_record(self) -> dict:
        return {"rows": [row.to_record() for row in self.rows]}


def incremental_experiment(
    docs: Sequence[ExperimentDoc],
    train_labels: Mapping[str, int],
    *,
    seed: int = 0,
    trainer: TrainerFn | None = None,
    cfg: FeatureConfig | None = None,
    alpha: float = 1.0,
) -> IncrementalReport:
    """Week-by-week retraining on the cumulative labeled pool.

    `train_labels` supplies the (possibly noisy) labels used for
    balancing and fitting; evaluation is always against the documents'
    ground-truth labels on the held-out 20 percent.  Weeks whose pool
    cannot produce a balanced trainable split are reported with status
    "OF" and no metrics.
    """

    missing = [doc.id for doc in docs if doc.id not in train_labels]
    if missing:
        raise ValueError(f"train labels missing for {len(missing)} docs, "
                         f"first: {missing[0]}")
    fit = trainer or default_trainer(cfg, alpha)
    rows: list[WeeklyBatch] = []
    best_f1: float | None = None
    for week in sorted({doc.week for doc in docs}):
        pool = [doc for doc in docs if doc.week <= week]
        pos_ids = [d.id for d in pool if train_labels[d.id] == 1]
        neg_ids = [d.id for d in pool if train_labels[d.id] == 0]
        try:
            balanced = set(balance_5050(pos_ids, neg_ids, seed=seed))
            subset = [d for d in pool if d.id in balanced]
            labels = [train_labels[d.id] for d in subset]
            train_docs, fit_labels, eval_docs = _split(subset, labels, seed)
            score = fit([d.tokens for d in train_docs], fit_labels)
            metrics = _evaluate(score, eval_docs)
        except (EmptyClassError, SingleClassError, EmptyCorpusError,
                TooFewPerClassError):
            rows.append(
                WeeklyBatch(
                    week=week,
                    pool_size=len(pool),
                    train_size=0,
                    eval_size=0,
                    status="OF",
                    metrics=None,
                    baseline_f1=best_f1,
                )
            )
            continue
        rows.append(
            WeeklyBatch(
                week=week,
                pool_size=len(pool),
                train_size=len(train_docs),
                eval_size=len(eval_docs),
                status="OK",
                metrics=metrics,
                baseline_f1=best_f1,
            )
        )
        if best_f1 is None or metrics.weighted_f1 > best_f1:
            best_f1 = metrics.weighted_f1
    return IncrementalReport(rows=tuple(rows))


# --- cross-source transfer ---------------------------------------------------


@dataclass(frozen=True, slots=True)
class CrossSliceResult:
    train_source: str
    test_source: str
    n_train: int
    n_eval_in: int
    n_eval_out: int
    in_slice: Metrics
    zero_shot: Metrics

    def to_record(self) -> dict:
        return {
            "train_source": self.train_source,
            "test_source": self.test_source,
            "n_train": self.n_train,
            "n_eval_in": self.n_eval_in,
            "n_eval_out": self.n_eval_out,
            "in_slice": self.in_slice.to_record(),
            "zero_shot": self.zero_shot.to_record(),
        }


def cross_slice_experiment(
    docs: Sequence[ExperimentDoc],
    train_source: str,
    test_source: str,
    *,
    seed: int = 0,
    trainer: TrainerFn | None = None,
    cfg: FeatureConfig | None = None,
    alpha: float = 1.0,
) -> CrossSliceResult:
    """Fit on one source slice, evaluate in-slice and zero-shot on another."""

    train_slice = [d for d in docs if d.source == train_source]
    test_slice = [d for d in docs if d.source == test_source]
    if not train_slice:
        raise EmptySliceError(f"no documents from source {train_source!r}")
    if not test_slice:
        raise EmptySliceError(f"no documents from source {test_source!r}")
    fit = trainer or default_trainer(cfg, alpha)

    labels = [d.label for d in train_slice]
    train_docs, fit_labels, eval_docs = _split(train_slice, labels, seed)
    score = fit([d.tokens for d in train_docs], fit_labels)
    return CrossSliceResult(
        train_source=train_source,
        test_source=test_source,
        n_train=len(train_docs),
        n_eval_in=len(eval_docs),
        n_eval_out=len(test_slice),
        in_slice=_evaluate(score, eval_docs),
        zero_shot=_evaluate(score, test_slice),
    )


# --- temporal drift ----------------------------------------------------------


@dataclass(frozen=True, slots=True)
class DriftRow:
    cutoff: datetime
    n_train: int
    n_eval_in: int
    n_eval_out: int
    in_period: Metrics
    out_of_period: Metrics

    @property
    def delta_f1(self) -> float:
        return self.out_of_period.weighted_f1 - self.in_period.weighted_f1

    def to_record(self) -> dict:
        return {
            "cutoff": self.cutoff.isoformat(),
            "n_train": self.n_train,
            "n_eval_in": self.n_eval_in,
            "n_eval_out": self.n_eval_out,
            "in_period": self.in_period.to_record(),
            "out_of_period": self.out_of_period.to_record(),
            "delta_f1": self.delta_f1,
        }


@dataclass(frozen=True, slots=True)
class DriftReport:
    rows: tuple[DriftRow, ...]

    @property
    def mean_delta_f1(self) -> float:
        if not self.rows:
            return 0.0
        return sum(row.delta_f1 for row in self.rows) / len(self.rows)

    def to_record(self) -> dict:
        return {
            "rows": [row.to_record() for row in self.rows],
            "mean_delta_f1": self.mean_delta_f1,
        }


def temporal_drift_experiment(
    docs: Sequence[ExperimentDoc],
    cutoffs: Sequence[datetime],
    *,
    seed: int = 0,
    trainer: TrainerFn | None = None,
    cfg: FeatureConfig | None = None,
    alpha: float = 1.0,
) -> DriftReport:
    """Train on documents up to each cutoff, evaluate before and after it."""

    fit = trainer or default_trainer(cfg, alpha)
    rows = []
    for cutoff in cutoffs:
        past = [d for d in docs if d.created_at <= cutoff]
        future = [d for d in docs if d.created_at > cutoff]
        if not past or not future:
            raise EmptySideError(
                f"cutoff {cutoff.isoformat()} leaves {len(past)} past and "
                f"{len(future)} future documents"
            )
        labels = [d.label for d in past]
        train_docs, fit_labels, eval_docs = _split(past, labels, seed)
        score = fit([d.tokens for d in train_docs], fit_labels)
        rows.append(
            DriftRow(
                cutoff=cutoff,
                n_train=len(train_docs),
                n_eval_in=len(eval_docs),
                n_eval_out=len(future),
                in_period=_evaluate(score, eval_docs),
                out_of_period=_evaluate(score, future),
            )
        )
    return DriftReport(rows=tuple(rows))


# --- toxicity handling policies ----------------------------------------------


class ToxicPolicy(str, Enum):
    KEEP = "KEEP"
    DROP = "DROP"
    TOXIC_AS_NEGATIVE = "TOXIC_AS_NEGATIVE"


def toxic_policy_experiment(
    docs: Sequence[ExperimentDoc],
    policy: ToxicPolicy,
    *,
    seed: int = 0,
    trainer: TrainerFn | None = None,
    cfg: FeatureConfig | None = None,
    alpha: float = 1.0,
) -> Metrics:
    """Rewrite the training side per policy; the eval side never moves.

    The split happens before the rewrite and depends only on labels and
    seed, so every policy is scored against the identical held-out set.
    """

    if not any(doc.toxic for doc in docs):
        raise NoToxicExamplesError("corpus has no toxic examples")
    policy = ToxicPolicy(policy)
    fit = trainer or default_trainer(cfg, alpha)

    labels = [d.label for d in docs]
    train_docs, fit_labels, eval_docs = _split(docs, labels, seed)
    if policy is ToxicPolicy.DROP:
        kept = [(d, y) for d, y in zip(train_docs, fit_labels) if not d.toxic]
        train_docs = [d for d, _ in kept]
        fit_labels = [y for _, y in kept]
    elif policy is ToxicPolicy.TOXIC_AS_NEGATIVE:
        fit_labels = [0 if d.toxic else y for d, y in zip(train_docs, fit_labels)]

    score = fit([d.tokens for d in train_docs], fit_labels)
    return _evaluate(score, eval_docs)
