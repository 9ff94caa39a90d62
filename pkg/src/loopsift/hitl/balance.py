"""Class balancing for training-set assembly."""

from __future__ import annotations

import random
from typing import Sequence

from ..errors import EmptyClassError


def balance_5050(
    positive_ids: Sequence[str],
    negative_ids: Sequence[str],
    seed: int = 0,
) -> tuple[str, ...]:
    """Downsample the majority class to the minority size.

    The minority class is kept whole; the majority class is subsampled
    with a seeded RNG.  Both sides keep their input order in the result,
    positives first.
    """

    if not positive_ids:
        raise EmptyClassError("no positive examples to balance")
    if not negative_ids:
        raise EmptyClassError("no negative examples to balance")

    rng = random.Random(seed)
    size = min(len(positive_ids), len(negative_ids))

    def pick(ids: Sequence[str]) -> list[str]:
        if len(ids) == size:
            return list(ids)
        chosen = set(rng.sample(range(len(ids)), k=size))
        return [item for i, item in enumerate(ids) if i in chosen]

    return tuple(pick(positive_ids) + pick(negative_ids))
