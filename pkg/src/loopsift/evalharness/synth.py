"""Seeded synthetic corpus generation for pipeline experiments.

Texts are built from three disjoint artificial vocabularies: class-bearing
positive terms, class-bearing negative terms and a shared common pool.
All surface forms are lowercase ascii letters so the full preprocessing
profile carries them through unchanged.  Three controlled distortions are
available:

* vocabulary drift: a seeded fraction of positive terms swaps to a second
  surface form from a configured week onward;
* slice-specific vocabulary: positive tokens are emitted with a
  source-specific suffix at a configured rate, so models trained on one
  source transfer imperfectly to another;
* toxicity: a fraction of positive examples carries the toxic flag (and,
  per the annotation scheme, no target groups).
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from datetime import datetime, timedelta, timezone

from ..errors import InvalidSpecError
from ..store.models import (
    KNOWN_LANGUAGES,
    KNOWN_SOURCES,
    TARGET_ORDER,
    Example,
    TargetGroup,
)
from .experiments import ExperimentDoc

_SOURCE_TAGS = {"NGO": "g", "ON1": "x", "ON2": "y", "ON3": "z", "TWITTER": "t"}

_DEFAULT_START = datetime(2019, 1, 7, tzinfo=timezone.utc)

_WEEK_SECONDS = 7 * 86400


def _code(index: int) -> str:
    # four base-26 letters, zero-padded with "a"
    letters = []
    for _ in range(4):
        index, rem = divmod(index, 26)
        letters.append(chr(ord("a") + rem))
    return "".join(reversed(letters))


@dataclass(frozen=True, slots=True)
class SyntheticCorpusSpec:
    n_examples: int = 5000
    n_weeks: int = 6
    positive_rate: float = 0.5
    toxic_rate: float = 0.24
    drift_fraction: float = 0.0
    drift_week: int | None = None
    slice_vocab_fraction: float = 0.0
    n_positive_terms: int = 60
    n_negative_terms: int = 60
    n_common_terms: int = 120
    specific_tokens_range: tuple[int, int] = (2, 4)
    common_tokens_range: tuple[int, int] = (6, 10)
    sources: tuple[str, ...] = ("NGO", "ON1", "ON2", "ON3", "TWITTER")
    languages: tuple[str, ...] = ("DE", "FR")
    start_at: datetime = field(default=_DEFAULT_START)

    def validate(self) -> None:
        if self.n_examples < 1:
            raise InvalidSpecError(f"n_examples must be >= 1, got {self.n_examples}")
        if self.n_weeks < 1:
            raise InvalidSpecError(f"n_weeks must be >= 1, got {self.n_weeks}")
        for name in ("positive_rate", "toxic_rate", "drift_fraction",
                     "slice_vocab_fraction"):
            value = getattr(self, name)
            if not 0.0 <= value <= 1.0:
                raise InvalidSpecError(f"{name} must be in [0, 1], got {value}")
        for name in ("n_positive_terms", "n_negative_terms", "n_common_terms"):
            if getattr(self, name) < 1:
                raise InvalidSpecError(f"{name} must be >= 1")
        for name in ("specific_tokens_range", "common_tokens_range"):
            lo, hi = getattr(self, name)
            if not 1 <= lo <= hi:
                raise InvalidSpecError(f"{name} must satisfy 1 <= lo <= hi")
        if not self.sources or not set(self.sources) <= KNOWN_SOURCES:
            raise InvalidSpecError(f"sources must be a non-empty subset of "
                                   f"{sorted(KNOWN_SOURCES)}")
        if not self.languages or not set(self.languages) <= KNOWN_LANGUAGES:
            raise InvalidSpecError(f"languages must be a non-empty subset of "
                                   f"{sorted(KNOWN_LANGUAGES)}")
        if self.drift_week is not None and not 1 <= self.drift_week:
            raise InvalidSpecError(f"drift_week must be >= 1, got {self.drift_week}")
        if self.start_at.tzinfo is None:
            raise InvalidSpecError("start_at must be timezone-aware")

    @property
    def effective_drift_week(self) -> int:
        if self.drift_week is not None:
            return self.drift_week
        return self.n_weeks // 2 + 1


@dataclass(frozen=True, slots=True)
class GroundTruth:
    label: int
    toxic: bool
    targets: tuple[TargetGroup, ...]


@dataclass(frozen=True, slots=True)
class SyntheticCorpus:
    spec: SyntheticCorpusSpec
    seed: int
    examples: tuple[Example, ...]
    truth: dict[str, GroundTruth]
    replaced_positive_ids: tuple[int, ...]

    def experiment_docs(self) -> tuple[ExperimentDoc, ...]:
        """Preprocessed view of the corpus for the experiment runners."""

        from ..textprep import full_tokens

        docs = []
        for example in self.examples:
            truth = self.truth[example.id]
            week = int(example.wave_tag[1:]) if example.wave_tag else 1
            docs.append(
                ExperimentDoc(
                    id=example.id,
                    tokens=full_tokens(example.text, example.language),
                    label=truth.label,
                    toxic=truth.toxic,
                    source=example.source,
                    language=example.language,
                    created_at=example.created_at,
                    week=week,
                )
            )
        return tuple(docs)


def generate_synthetic_corpus(
    spec: SyntheticCorpusSpec, seed: int = 0
) -> SyntheticCorpus:
    spec.validate()
    term_rng = random.Random(f"{seed}:terms")
    n_replaced = round(spec.drift_fraction * spec.n_positive_terms)
    replaced = tuple(
        sorted(term_rng.sample(range(spec.n_positive_terms), k=n_replaced))
    )
    replaced_set = set(replaced)
    drift_week = spec.effective_drift_week

    max_per_week = -(-spec.n_examples // spec.n_weeks)
    spacing = max(1, _WEEK_SECONDS // (max_per_week + 1))

    rng = random.Random(seed)
    examples: list[Example] = []
    truth: dict[str, GroundTruth] = {}
    week_positions: dict[int, int] = {}
    for i in range(spec.n_examples):
        week = i * spec.n_weeks // spec.n_examples + 1
        position = week_positions.get(week, 0)
        week_positions[week] = position + 1
        created = spec.start_at + timedelta(
            seconds=(week - 1) * _WEEK_SECONDS + position * spacing
        )

        label = 1 if rng.random() < spec.positive_rate else 0
        toxic = label == 1 and rng.random() < spec.toxic_rate
        if label == 1 and not toxic:
            chosen = rng.sample(TARGET_ORDER, k=rng.randint(1, 2))
            targets = tuple(sorted(chosen, key=TARGET_ORDER.index))
        else:
            targets = ()
        source = rng.choice(spec.sources)
        language = rng.choice(spec.languages)

        tokens: list[str] = []
        n_specific = rng.randint(*spec.specific_tokens_range)
        for _ in range(n_specific):
            if label == 1:
                term = rng.randrange(spec.n_positive_terms)
                era = "b" if week >= drift_week and term in replaced_set else "a"
                surface = f"hs{_code(term)}{era}"
                if rng.random() < spec.slice_vocab_fraction:
                    surface += _SOURCE_TAGS[source]
            else:
                surface = f"nn{_code(rng.randrange(spec.n_negative_terms))}"
            tokens.append(surface)
        n_common = rng.randint(*spec.common_tokens_range)
        for _ in range(n_common):
            tokens.append(f"cc{_code(rng.randrange(spec.n_common_terms))}")
        rng.shuffle(tokens)

        example_id = f"syn-{i:05d}"
        examples.append(
            Example(
                id=example_id,
                text=" ".join(tokens),
                source=source,
                language=language,
                created_at=created,
                ingested_at=created,
                wave_tag=f"w{week:02d}",
            )
        )
        truth[example_id] = GroundTruth(label=label, toxic=toxic, targets=targets)

    return SyntheticCorpus(
        spec=spec,
        seed=seed,
        examples=tuple(examples),
        truth=truth,
        replaced_positive_ids=replaced,
    )


# The corpus specs the bundled experiments and acceptance checks run on:
# a stable six-week corpus for the weekly-loop and policy experiments, and
# a drifted variant whose positive vocabulary shifts from the fourth week.
# One specific token per document (sometimes two) keeps early weeks genuinely
# hard, so the weekly series shows the model improving as the pool grows.
EXPERIMENT_SPEC = SyntheticCorpusSpec(specific_tokens_range=(1, 2))
DRIFTED_SPEC = SyntheticCorpusSpec(
    specific_tokens_range=(1, 2), drift_fraction=0.8
)
