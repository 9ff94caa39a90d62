"""Random hyperparameter search with median pruning.

Each trial samples one candidate from every axis of the space and is
evaluated fold by fold.  After fold s, the trial's running mean weighted
F1 is compared against the median of the running means that previously
*completed* trials had at fold s; strictly below the median means the
trial is pruned.  The first trial therefore always completes, and the
winner is the completed trial with the highest mean F1, earliest trial
winning ties.
"""

from __future__ import annotations

import random
import statistics
from dataclasses import dataclass
from typing import Sequence

from ..errors import EmptySpaceError
from .crossval import iter_fold_metrics
from .features import FeatureConfig
from ..evalharness.metrics import Metrics


@dataclass(frozen=True, slots=True)
class Trial:
    index: int
    config: FeatureConfig
    alpha: float
    fold_f1: tuple[float, ...]
    running_means: tuple[float, ...]
    status: str  # "completed" or "pruned"

    @property
    def mean_f1(self) -> float | None:
        return self.running_means[-1] if self.status == "completed" else None


@dataclass(frozen=True, slots=True)
class SearchResult:
    config: FeatureConfig
    alpha: float
    best_f1: float
    trace: tuple[Trial, ...]


_AXES = ("max_features", "ngram_max", "alpha")


def hyperparam_search(
    corpus: Sequence[Sequence[str]],
    labels: Sequence[int],
    space: dict[str, Sequence],
    budget: int,
    seed: int,
    k: int = 10,
) -> SearchResult:
    if budget < 1:
        raise ValueError(f"budget must be >= 1, got {budget}")
    unknown = set(space) - set(_AXES)
    if unknown:
        raise EmptySpaceError(f"unknown search axes: {sorted(unknown)}")
    axes = {
        "max_features": list(space.get("max_features", [FeatureConfig().max_features])),
        "ngram_max": list(space.get("ngram_max", [FeatureConfig().ngram_max])),
        "alpha": list(space.get("alpha", [1.0])),
    }
    if any(not values for values in axes.values()):
        raise EmptySpaceError(f"empty axis in search space: {space}")

    rng = random.Random(seed)
    trace: list[Trial] = []
    completed_running_means: list[tuple[float, ...]] = []

    for trial_index in range(budget):
        config = FeatureConfig(
            max_features=rng.choice(axes["max_features"]),
            ngram_max=rng.choice(axes["ngram_max"]),
        )
        alpha = float(rng.choice(axes["alpha"]))

        fold_f1: list[float] = []
        running_means: list[float] = []
        pruned = False
        for metrics in iter_fold_metrics(corpus, labels, config, k, seed, alpha):
            fold_f1.append(metrics.weighted_f1)
            running_means.append(sum(fold_f1) / len(fold_f1))
            s = len(fold_f1)
            if completed_running_means:
                median_at_s = statistics.median(
                    means[s - 1] for means in completed_running_means
                )
                if running_means[-1] < median_at_s:
                    pruned = True
                    break
        trial = Trial(
            index=trial_index,
            config=config,
            alpha=alpha,
            fold_f1=tuple(fold_f1),
            running_means=tuple(running_means),
            status="pruned" if pruned else "completed",
        )
        trace.append(trial)
        if not pruned:
            completed_running_means.append(trial.running_means)

    best: Trial | None = None
    for trial in trace:
        if trial.status != "completed":
            continue
        if best is None or trial.mean_f1 > best.mean_f1:
            best = trial
    assert best is not None  # the first trial always completes
    return SearchResult(
        config=best.config,
        alpha=best.alpha,
        best_f1=best.mean_f1,
        trace=tuple(trace),
    )
