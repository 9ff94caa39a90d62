"""Binary classification metrics with support weighting.

Per-class precision, recall and F1 are aggregated by class support:
weighted_X = sum_c (support_c / N) * X_c.  Every empty denominator
contributes 0, so degenerate inputs (one class absent, nothing predicted
positive) stay well-defined.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

from ..errors import LengthMismatchError


@dataclass(frozen=True, slots=True)
class Metrics:
    precision: float
    recall: float
    weighted_f1: float
    support_pos: float
    support_neg: float

    def to_record(self) -> dict:
        return {
            "precision": self.precision,
            "recall": self.recall,
            "weighted_f1": self.weighted_f1,
            "support_pos": self.support_pos,
            "support_neg": self.support_neg,
        }


def _safe_div(num: float, den: float) -> float:
    return num / den if den else 0.0


def compute_metrics(y_true: Sequence[int], y_pred: Sequence[int]) -> Metrics:
    if len(y_true) != len(y_pred):
        raise LengthMismatchError(
            f"got {len(y_true)} true labels but {len(y_pred)} predictions"
        )
    if not y_true:
        raise LengthMismatchError("label sequences are empty")
    for value in (*y_true, *y_pred):
        if value not in (0, 1):
            raise ValueError(f"labels must be binary, got {value!r}")

    n = len(y_true)
    weighted_precision = 0.0
    weighted_recall = 0.0
    weighted_f1 = 0.0
    supports = {}
    for cls in (1, 0):
        tp = sum(1 for t, p in zip(y_true, y_pred) if t == cls and p == cls)
        fp = sum(1 for t, p in zip(y_true, y_pred) if t != cls and p == cls)
        fn = sum(1 for t, p in zip(y_true, y_pred) if t == cls and p != cls)
        support = tp + fn
        supports[cls] = support
        precision = _safe_div(tp, tp + fp)
        recall = _safe_div(tp, tp + fn)
        f1 = _safe_div(2.0 * precision * recall, precision + recall)
        weight = support / n
        weighted_precision += weight * precision
        weighted_recall += weight * recall
        weighted_f1 += weight * f1
    return Metrics(
        precision=weighted_precision,
        recall=weighted_recall,
        weighted_f1=weighted_f1,
        support_pos=supports[1],
        support_neg=supports[0],
    )


def mean_metrics(rows: Sequence[Metrics]) -> Metrics:
    if not rows:
        raise LengthMismatchError("cannot average zero metric rows")
    n = len(rows)
    return Metrics(
        precision=sum(r.precision for r in rows) / n,
        recall=sum(r.recall for r in rows) / n,
        weighted_f1=sum(r.weighted_f1 for r in rows) / n,
        support_pos=sum(r.support_pos for r in rows) / n,
        support_neg=sum(r.support_neg for r in rows) / n,
    )


def std_metrics(rows: Sequence[Metrics]) -> Metrics:
    """Population standard deviation, field by field."""

    if not rows:
        raise LengthMismatchError("cannot take std of zero metric rows")
    center = mean_metrics(rows)

    def _std(values: list[float], mu: float) -> float:
        return math.sqrt(sum((v - mu) ** 2 for v in values) / len(values))

    return Metrics(
        precision=_std([r.precision for r in rows], center.precision),
        recall=_std([r.recall for r in rows], center.recall),
        weighted_f1=_std([r.weighted_f1 for r in rows], center.weighted_f1),
        support_pos=_std([r.support_pos for r in rows], center.support_pos),
        support_neg=_std([r.support_neg for r in rows], center.support_neg),
    )
