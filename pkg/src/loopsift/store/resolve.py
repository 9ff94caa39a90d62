"""Aggregation of multiple strong annotations into one resolved label.

The rules, in order of precedence over the chronologically sorted
annotations of one example:

1. one annotation: its label stands (SINGLE);
2. two agreeing annotations: that label (MAJORITY);
3. two disagreeing annotations: unresolved, a third annotator must decide;
4. exactly three where the first two disagreed: the third's label stands
   (TIEBREAK_THIRD);
5. otherwise: plain majority, with an even split resolving to 0 so that a
   contested item never enters training as a positive (MAJORITY).

When the resolved label is positive, the target sets of every annotator
who voted positive are unioned.
"""

from __future__ import annotations

from dataclasses import dataclass

from ..errors import UnresolvedTieError
from .models import Annotation, Resolution, TargetGroup


@dataclass(frozen=True, slots=True)
class ResolvedLabel:
    example_id: str
    label: int
    resolution: Resolution
    targets: frozenset[TargetGroup]
    toxic: bool


def _chronological(annotations: list[Annotation]) -> list[Annotation]:
    return sorted(annotations, key=lambda a: (a.created_at, a.annotator_id))


def resolve_annotations(
    example_id: str, annotations: list[Annotation]
) -> ResolvedLabel:
    """Resolve the strong label for one example.

    Raises :class:`UnresolvedTieError` when exactly two annotators disagree
    and no tie-breaking annotation has arrived yet.
    """

    if not annotations:
        raise ValueError(f"no annotations to resolve for {example_id!r}")
    ordered = _chronological(annotations)
    labels = [a.label for a in ordered]

    if len(ordered) == 1:
        label, resolution = labels[0], Resolution.SINGLE
    elif len(ordered) == 2:
        if labels[0] != labels[1]:
            raise UnresolvedTieError(
                "two annotators disagree; a third annotation is required",
                example_id=example_id,
            )
        label, resolution = labels[0], Resolution.MAJORITY
    elif len(ordered) == 3 and labels[0] != labels[1]:
        label, resolution = labels[2], Resolution.TIEBREAK_THIRD
    else:
        positives = sum(labels)
        negatives = len(labels) - positives
        # An even split resolves to the negative class.
        label = 1 if positives > negatives else 0
        resolution = Resolution.MAJORITY

    targets: frozenset[TargetGroup] = frozenset()
    toxic = False
    if label == 1:
        for a in ordered:
            if a.label == 1:
                targets = targets | a.targets
                toxic = toxic or a.toxic
    return ResolvedLabel(
        example_id=example_id,
        label=label,
        resolution=resolution,
        targets=targets,
        toxic=toxic,
    )
