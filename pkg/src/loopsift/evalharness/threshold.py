"""Probability-band breakdown of reviewed items and threshold selection.

Scored items are grouped into fixed probability bands by their integer
percent bucket.  The published band layout deliberately overlaps (the
0.89-0.80 band contains the 0.89-0.85 one); cumulative statistics use the
disjoint decomposition where 0.89-0.80 is replaced by 0.84-0.80.

Two thresholds are derived:

* recommended: the lower edge of the highest band whose rounded positive
  share is at least 90 percent, or None when no band qualifies.
* minimum: the lowest band lower-edge whose cumulative (disjoint) rounded
  positive share from that edge upward is at least 80 percent, or None.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from ..errors import EmptyInputError, LengthMismatchError

# (upper, lower) inclusive percent bounds; the two 89-x rows overlap on
# purpose so the rendered table shows a fine and a coarse high-band cut
REPORT_BAND_BOUNDS: tuple[tuple[int, int], ...] = (
    (100, 90),
    (89, 85),
    (89, 80),
    (79, 70),
    (69, 60),
    (59, 50),
)
DISJOINT_BAND_BOUNDS: tuple[tuple[int, int], ...] = (
    (100, 90),
    (89, 85),
    (84, 80),
    (79, 70),
    (69, 60),
    (59, 50),
)

RECOMMENDED_SHARE = 90
MINIMUM_CUMULATIVE_SHARE = 80


def probability_bucket(probability: float) -> int:
    """Integer percent bucket; tolerant of float noise at band edges."""

    if not 0.0 <= probability <= 1.0:
        raise ValueError(f"probability out of range: {probability!r}")
    return int(probability * 100 + 1e-9)


def round_half_up_pct(numerator: int, denominator: int) -> int:
    """Exact integer round-half-up of 100 * numerator / denominator."""

    if denominator <= 0:
        raise ValueError("denominator must be positive")
    return (200 * numerator + denominator) // (2 * denominator)


@dataclass(frozen=True, slots=True)
class Band:
    upper: float
    lower: float
    total: int
    positives: int

    @property
    def negatives(self) -> int:
        return self.total - self.positives

    @property
    def positive_pct(self) -> int:
        if self.total == 0:
            return 0
        return round_half_up_pct(self.positives, self.total)

    @property
    def label(self) -> str:
        return f"{self.upper:.2f} - {self.lower:.2f}"

    def to_record(self) -> dict:
        return {
            "upper": self.upper,
            "lower": self.lower,
            "total": self.total,
            "positives": self.positives,
            "negatives": self.negatives,
            "positive_pct": self.positive_pct,
        }


@dataclass(frozen=True, slots=True)
class ThresholdBandReport:
    bands: tuple[Band, ...]
    disjoint_bands: tuple[Band, ...]
    recommended: float | None
    minimum: float | None
    n_scored: int
    n_banded: int

    def to_record(self) -> dict:
        return {
            "bands": [band.to_record() for band in self.bands],
            "disjoint_bands": [band.to_record() for band in self.disjoint_bands],
            "recommended": self.recommended,
            "minimum": self.minimum,
            "n_scored": self.n_scored,
            "n_banded": self.n_banded,
        }


def _fill_bands(
    bounds: Sequence[tuple[int, int]], buckets: Sequence[tuple[int, int]]
) -> tuple[Band, ...]:
    bands = []
    for upper, lower in bounds:
        total = 0
        positives = 0
        for bucket, label in buckets:
            if lower <= bucket <= upper:
                total += 1
                positives += label
        bands.append(Band(upper / 100, lower / 100, total, positives))
    return tuple(bands)


def compute_threshold_report(
    probabilities: Sequence[float], labels: Sequence[int]
) -> ThresholdBandReport:
    """Band breakdown over scored items with reviewed binary labels."""

    if len(probabilities) != len(labels):
        raise LengthMismatchError(
            f"{len(probabilities)} probabilities vs {len(labels)} labels"
        )
    if not probabilities:
        raise EmptyInputError("no scored items")
    for label in labels:
        if label not in (0, 1):
            raise ValueError(f"labels must be binary, got {label!r}")

    buckets = [
        (probability_bucket(p), label) for p, label in zip(probabilities, labels)
    ]
    bands = _fill_bands(REPORT_BAND_BOUNDS, buckets)
    disjoint = _fill_bands(DISJOINT_BAND_BOUNDS, buckets)

    recommended = None
    for band in bands:
        if band.total and band.positive_pct >= RECOMMENDED_SHARE:
            recommended = band.lower
            break

    minimum = None
    for index in range(len(disjoint) - 1, -1, -1):
        total = sum(band.total for band in disjoint[: index + 1])
        positives = sum(band.positives for band in disjoint[: index + 1])
        if total and round_half_up_pct(positives, total) >= MINIMUM_CUMULATIVE_SHARE:
            minimum = disjoint[index].lower
            break

    n_banded = sum(band.total for band in disjoint)
    return ThresholdBandReport(
        bands=bands,
        disjoint_bands=disjoint,
        recommended=recommended,
        minimum=minimum,
        n_scored=len(probabilities),
        n_banded=n_banded,
    )
