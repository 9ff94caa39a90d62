"""Deterministic simulated annotators for loop experiments and tests.

Each (seed, annotator, example) triple gets its own RNG stream, so a
simulated judgment never depends on the order in which items are
presented: re-running a slice, or interleaving two annotators, gives
identical answers.
"""

from __future__ import annotations

import datetime as dt
import random

from ..store.models import TARGET_ORDER, Annotation, AnnotationKind


class SimulatedAnnotator:
    """Labels examples from ground truth, flipping each with probability q."""

    def __init__(self, seed: int, q: float = 0.1, annotator_id: str = "sim-1"):
        if not 0.0 <= q <= 1.0:
            raise ValueError(f"flip probability must be in [0, 1], got {q}")
        self.seed = seed
        self.q = q
        self.annotator_id = annotator_id

    def _rng(self, example_id: str) -> random.Random:
        return random.Random(f"{self.seed}:{self.annotator_id}:{example_id}")

    def decide(self, example_id: str, truth) -> tuple[int, bool, tuple]:
        """Returns (label, toxic, targets) honoring the annotation scheme.

        `truth` must expose .label, .toxic and .targets.  A judgment
        flipped to positive gets a single invented target group.
        """

        rng = self._rng(example_id)
        flip = rng.random() < self.q
        label = 1 - truth.label if flip else truth.label
        if label == 0:
            return (0, False, ())
        if not flip:
            return (1, truth.toxic, tuple(truth.targets))
        return (1, False, (rng.choice(TARGET_ORDER),))

    def make_annotation(
        self,
        example_id: str,
        truth,
        created_at: dt.datetime,
        kind: AnnotationKind = AnnotationKind.STRONG,
    ) -> Annotation:
        label, toxic, targets = self.decide(example_id, truth)
        return Annotation(
            example_id=example_id,
            annotator_id=self.annotator_id,
            label=label,
            toxic=toxic,
            targets=frozenset(targets),
            kind=kind,
            created_at=created_at,
        )
