"""Weak-label refresh: scoring unreviewed examples with the active model."""

from __future__ import annotations

from typing import Sequence

from ..errors import ScorerUnavailableError
from ..store.store import CorpusStore


def generate_weak_labels(
    store: CorpusStore,
    scorer,
    example_ids: Sequence[str] | None = None,
) -> list[tuple[str, float]]:
    """Score examples and persist weak labels in one all-or-nothing write.

    With no explicit ids, every example lacking a strong label is scored.
    Nothing is persisted unless the scorer returns a clean probability for
    every text.
    """

    if example_ids is None:
        rows = store.query_examples()
        targets = [e for e, state in rows if state.strong_label is None]
    else:
        targets = [store.get_example(example_id) for example_id in example_ids]
    if not targets:
        return []

    texts = [example.text for example in targets]
    languages = [example.language for example in targets]
    probabilities = scorer.score_batch(texts, languages)
    if len(probabilities) != len(targets):
        raise ScorerUnavailableError(
            f"{len(probabilities)} probabilities for {len(targets)} texts"
        )
    for value in probabilities:
        if not 0.0 <= value <= 1.0:
            raise ScorerUnavailableError(f"probability out of range: {value!r}")

    version = getattr(scorer, "version", "unknown")
    updates = [
        (example.id, float(probability), version)
        for example, probability in zip(targets, probabilities)
    ]
    store.set_weak_labels(updates)
    return [(example_id, probability) for example_id, probability, _ in updates]
