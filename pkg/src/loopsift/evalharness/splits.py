"""Deterministic stratified train/eval splitting."""

from __future__ import annotations

import random
from typing import Sequence

from ..errors import SingleClassError


def stratified_split_8020(
    labels: Sequence[int], seed: int = 0
) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """Split indices 80/20 per class; returns (train, eval) index tuples.

    Class order and the per-class shuffle are seeded, so equal inputs give
    equal splits.  The train share is floored per class, so a class of 5
    contributes 4 train and 1 eval item.  Requires both classes present.
    """

    by_class: dict[int, list[int]] = {}
    for i, label in enumerate(labels):
        by_class.setdefault(label, []).append(i)
    if len(by_class) < 2:
        raise SingleClassError(
            f"stratified split needs both classes, got {sorted(by_class)}"
        )

    rng = random.Random(seed)
    train: list[int] = []
    evaluation: list[int] = []
    for label in sorted(by_class):
        indices = by_class[label][:]
        rng.shuffle(indices)
        cut = len(indices) * 4 // 5
        train.extend(indices[:cut])
        evaluation.extend(indices[cut:])
    return tuple(sorted(train)), tuple(sorted(evaluation))
