"""Stratified k-fold cross-validation."""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Iterator, Sequence

from ..errors import TooFewPerClassError
from ..evalharness.metrics import Metrics, compute_metrics, mean_metrics, std_metrics
from .features import FeatureConfig, fit_vocabulary, vectorize, vectorize_corpus
from .model import posterior_from_vector, train_mnb


@dataclass(frozen=True, slots=True)
class CvReport:
    k: int
    per_fold: tuple[Metrics, ...]
    mean: Metrics
    std: Metrics


def stratified_folds(
    labels: Sequence[int], k: int, seed: int
) -> list[list[int]]:
    """k disjoint index folds with near-equal class mix, seeded shuffle."""

    by_class: dict[int, list[int]] = {0: [], 1: []}
    for index, label in enumerate(labels):
        by_class[label].append(index)
    if min(len(by_class[0]), len(by_class[1])) < k:
        raise TooFewPerClassError(
            f"need at least {k} examples per class, got "
            f"{len(by_class[1])} positive / {len(by_class[0])} negative"
        )
    rng = random.Random(seed)
    folds: list[list[int]] = [[] for _ in range(k)]
    for cls in (0, 1):
        indices = by_class[cls][:]
        rng.shuffle(indices)
        for position, index in enumerate(indices):
            folds[position % k].append(index)
    return [sorted(fold) for fold in folds]


def iter_fold_metrics(
    corpus: Sequence[Sequence[str]],
    labels: Sequence[int],
    cfg: FeatureConfig,
    k: int,
    seed: int,
    alpha: float,
) -> Iterator[Metrics]:
    """Yield one Metrics per fold; vocabulary refit on each training part."""

    folds = stratified_folds(labels, k, seed)
    for held_out in folds:
        held = set(held_out)
        train_docs = [corpus[i] for i in range(len(corpus)) if i not in held]
        train_labels = [labels[i] for i in range(len(labels)) if i not in held]
        vocabulary = fit_vocabulary(train_docs, cfg)
        X = vectorize_corpus(train_docs, vocabulary, cfg)
        model = train_mnb(
            X, train_labels, alpha, config=cfg, vocabulary=vocabulary
        )
        y_true = [labels[i] for i in held_out]
        y_pred = []
        for i in held_out:
            p = posterior_from_vector(model, vectorize(corpus[i], vocabulary, cfg))
            y_pred.append(1 if p >= 0.5 else 0)
        yield compute_metrics(y_true, y_pred)


def cross_validate(
    corpus: Sequence[Sequence[str]],
    labels: Sequence[int],
    cfg: FeatureConfig | None = None,
    k: int = 10,
    seed: int = 0,
    alpha: float = 1.0,
) -> CvReport:
    cfg = cfg or FeatureConfig()
    per_fold = tuple(iter_fold_metrics(corpus, labels, cfg, k, seed, alpha))
    return CvReport(
        k=k,
        per_fold=per_fold,
        mean=mean_metrics(per_fold),
        std=std_metrics(per_fold),
    )
