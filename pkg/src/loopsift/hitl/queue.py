"""Annotation queue construction and per-annotator slice assignment.

The queue orders candidates by descending model probability (example id
ascending as the tiebreak), so reviewers see the most confident
hate-speech predictions first.  Each annotator receives a slice that
shares one seeded quality-control subset with every other slice; the
remaining capacity is dealt round-robin from the top of the queue.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Sequence

from ..errors import QcLargerThanPoolError

DEFAULT_SLICE_SIZE = 500
DEFAULT_QC_COUNT = 60


@dataclass(frozen=True, slots=True)
class AnnotationQueue:
    items: tuple[tuple[str, float], ...]
    qc_ids: tuple[str, ...]
    slices: tuple[tuple[str, ...], ...]
    slice_size: int

    def to_record(self) -> dict:
        return {
            "items": [[example_id, probability] for example_id, probability
                      in self.items],
            "qc_ids": list(self.qc_ids),
            "slices": [list(chunk) for chunk in self.slices],
            "slice_size": self.slice_size,
        }


def order_candidates(
    candidates: Sequence[tuple[str, float]]
) -> tuple[tuple[str, float], ...]:
    return tuple(sorted(candidates, key=lambda item: (-item[1], item[0])))


def build_annotation_queue(
    candidates: Sequence[tuple[str, float]],
    *,
    slice_size: int = DEFAULT_SLICE_SIZE,
    qc_count: int = DEFAULT_QC_COUNT,
    n_annotators: int = 1,
    seed: int = 0,
) -> AnnotationQueue:
    """Order candidates and cut per-annotator slices with a shared QC set."""

    if slice_size < 1:
        raise ValueError(f"slice_size must be >= 1, got {slice_size}")
    if n_annotators < 1:
        raise ValueError(f"n_annotators must be >= 1, got {n_annotators}")
    if not 0 <= qc_count <= slice_size:
        raise ValueError(
            f"qc_count must be in [0, slice_size], got {qc_count}"
        )
    ordered = order_candidates(candidates)
    if qc_count > len(ordered):
        raise QcLargerThanPoolError(
            f"qc_count={qc_count} exceeds pool of {len(ordered)}"
        )

    # the round's working pool: what the annotators can actually absorb
    capacity = qc_count + n_annotators * (slice_size - qc_count)
    pool = [example_id for example_id, _ in ordered[:capacity]]
    rank = {example_id: i for i, example_id in enumerate(pool)}

    rng = random.Random(seed)
    qc_ids = tuple(sorted(rng.sample(pool, k=qc_count), key=rank.__getitem__))
    qc_set = set(qc_ids)

    remaining = [example_id for example_id in pool if example_id not in qc_set]
    assigned: list[list[str]] = [[] for _ in range(n_annotators)]
    for position, example_id in enumerate(remaining):
        assigned[position % n_annotators].append(example_id)

    slices = tuple(
        tuple(sorted(qc_set | set(chunk), key=rank.__getitem__))
        for chunk in assigned
    )
    return AnnotationQueue(
        items=ordered, qc_ids=qc_ids, slices=slices, slice_size=slice_size
    )
