"""Record types for the corpus store.

Every type knows how to round-trip itself through a flat JSON record with
a fixed key order, which is what the JSONL persistence layer writes.
Validation lives here so that the same rules guard ingestion, the HTTP
service, and test fixtures.
"""

from __future__ import annotations

import datetime as dt
import enum
import unicodedata
from dataclasses import dataclass, field

from ..clock import format_utc, parse_utc
from ..errors import (
    EmptyTextError,
    MalformedTimestampError,
    SchemeViolationError,
)

# Canonical source/language names; anything else is carried as a free tag.
KNOWN_SOURCES = frozenset({"NGO", "ON1", "ON2", "ON3", "TWITTER"})
KNOWN_LANGUAGES = frozenset({"DE", "FR"})


class TargetGroup(str, enum.Enum):
    """The closed set of group categories a positive label may target."""

    SEX = "SEX"
    AGE = "AGE"
    GENDER = "GENDER"
    RELIGION = "RELIGION"
    NATIONALITY = "NATIONALITY"
    IMPAIRMENT = "IMPAIRMENT"
    STATUS = "STATUS"
    POLITICS = "POLITICS"
    APPEARANCE = "APPEARANCE"
    OTHER = "OTHER"


# Display and serialization order (enum declaration order).
TARGET_ORDER: tuple[TargetGroup, ...] = tuple(TargetGroup)
_TARGET_RANK = {group: rank for rank, group in enumerate(TARGET_ORDER)}


def sort_targets(targets: frozenset[TargetGroup]) -> list[str]:
    return [g.value for g in sorted(targets, key=_TARGET_RANK.__getitem__)]


class AnnotationKind(str, enum.Enum):
    WEAK = "WEAK"
    STRONG = "STRONG"
    QC = "QC"


class Resolution(str, enum.Enum):
    SINGLE = "SINGLE"
    MAJORITY = "MAJORITY"
    TIEBREAK_THIRD = "TIEBREAK_THIRD"
    QC_OVERRIDE = "QC_OVERRIDE"


def _parse_ts(value: object, field_name: str) -> dt.datetime:
    if isinstance(value, dt.datetime):
        if value.tzinfo is None:
            raise MalformedTimestampError(
                f"{field_name} must be timezone-aware", field=field_name
            )
        return value.astimezone(dt.timezone.utc)
    if isinstance(value, str):
        try:
            return parse_utc(value)
        except ValueError as exc:
            raise MalformedTimestampError(
                f"{field_name}: {exc}", field=field_name
            ) from exc
    raise MalformedTimestampError(
        f"{field_name} must be a timestamp, got {type(value).__name__}",
        field=field_name,
    )


@dataclass(frozen=True, slots=True)
class Example:
    """One ingested document."""

    id: str
    text: str
    source: str
    language: str
    created_at: dt.datetime
    ingested_at: dt.datetime
    wave_tag: str | None = None
    metadata: dict[str, str] | None = None

    def validate(self) -> None:
        if not self.id or not isinstance(self.id, str):
            raise EmptyTextError("example id must be a non-empty string", id=self.id)
        normalized = unicodedata.normalize("NFC", self.text or "")
        if not normalized.strip():
            raise EmptyTextError("example text is empty", id=self.id)
        if self.created_at > self.ingested_at:
            raise MalformedTimestampError(
                "created_at is later than ingested_at", id=self.id
            )

    @classmethod
    def from_record(cls, record: dict) -> "Example":
        example = cls(
            id=str(record.get("id", "")),
            text=record.get("text", ""),
            source=str(record.get("source", "OTHER")),
            language=str(record.get("language", "OTHER")),
            created_at=_parse_ts(record.get("created_at"), "created_at"),
            ingested_at=_parse_ts(record.get("ingested_at"), "ingested_at"),
            wave_tag=record.get("wave_tag"),
            metadata=record.get("metadata"),
        )
        example.validate()
        return example

    def to_record(self) -> dict:
        record: dict = {
            "id": self.id,
            "text": self.text,
            "source": self.source,
            "language": self.language,
            "created_at": format_utc(self.created_at),
            "ingested_at": format_utc(self.ingested_at),
        }
        if self.wave_tag is not None:
            record["wave_tag"] = self.wave_tag
        if self.metadata is not None:
            record["metadata"] = self.metadata
        return record


@dataclass(frozen=True, slots=True)
class Annotation:
    """One human or machine judgment over an example.

    Scheme invariants (checked by :meth:`validate`):
    toxic entails label=1 with no targets; a positive label requires either
    the toxic flag or at least one target; a negative label allows neither.
    """

    example_id: str
    annotator_id: str
    label: int
    toxic: bool
    targets: frozenset[TargetGroup] = field(default_factory=frozenset)
    kind: AnnotationKind = AnnotationKind.STRONG
    created_at: dt.datetime = dt.datetime(1970, 1, 1, tzinfo=dt.timezone.utc)

    def validate(self) -> None:
        if self.label not in (0, 1):
            raise SchemeViolationError(
                f"label must be 0 or 1, got {self.label!r}", example_id=self.example_id
            )
        if self.toxic and self.targets:
            raise SchemeViolationError(
                "toxic annotations cannot carry target groups",
                example_id=self.example_id,
            )
        if self.toxic and self.label != 1:
            raise SchemeViolationError(
                "toxic annotations must carry label 1", example_id=self.example_id
            )
        if self.label == 1 and not self.toxic and not self.targets:
            raise SchemeViolationError(
                "a positive label requires the toxic flag or at least one target",
                example_id=self.example_id,
            )
        if self.label == 0 and (self.toxic or self.targets):
            raise SchemeViolationError(
                "a negative label allows neither toxic nor targets",
                example_id=self.example_id,
            )

    @classmethod
    def from_record(cls, record: dict) -> "Annotation":
        try:
            targets = frozenset(TargetGroup(t) for t in record.get("targets", []))
        except ValueError as exc:
            raise SchemeViolationError(str(exc)) from exc
        try:
            kind = AnnotationKind(record.get("kind", "STRONG"))
        except ValueError as exc:
            raise SchemeViolationError(str(exc)) from exc
        annotation = cls(
            example_id=str(record.get("example_id", "")),
            annotator_id=str(record.get("annotator_id", "")),
            label=record.get("label", 0),
            toxic=bool(record.get("toxic", False)),
            targets=targets,
            kind=kind,
            created_at=_parse_ts(record.get("created_at"), "created_at"),
        )
        annotation.validate()
        return annotation

    def to_record(self) -> dict:
        return {
            "example_id": self.example_id,
            "annotator_id": self.annotator_id,
            "label": self.label,
            "toxic": self.toxic,
            "targets": sort_targets(self.targets),
            "kind": self.kind.value,
            "created_at": format_utc(self.created_at),
        }


@dataclass(frozen=True, slots=True)
class LabelState:
    """Current label knowledge about one example."""

    example_id: str
    weak_probability: float | None = None
    weak_label: int | None = None
    strong_label: int | None = None
    resolution: Resolution | None = None
    model_version: str | None = None

    def validate(self) -> None:
        if self.weak_probability is not None:
            if not 0.0 <= self.weak_probability <= 1.0:
                raise ValueError(
                    f"weak_probability out of range: {self.weak_probability}"
                )
            if self.weak_label is not None:
                expected = 1 if self.weak_probability >= 0.5 else 0
                if self.weak_label != expected:
                    raise ValueError(
                        "weak_label inconsistent with weak_probability"
                    )

    @classmethod
    def from_record(cls, record: dict) -> "LabelState":
        resolution = record.get("resolution")
        state = cls(
            example_id=str(record.get("example_id", "")),
            weak_probability=record.get("weak_probability"),
            weak_label=record.get("weak_label"),
            strong_label=record.get("strong_label"),
            resolution=Resolution(resolution) if resolution is not None else None,
            model_version=record.get("model_version"),
        )
        state.validate()
        return state

    def to_record(self) -> dict:
        record: dict = {"example_id": self.example_id}
        if self.weak_probability is not None:
            record["weak_probability"] = self.weak_probability
        if self.weak_label is not None:
            record["weak_label"] = self.weak_label
        if self.strong_label is not None:
            record["strong_label"] = self.strong_label
        if self.resolution is not None:
            record["resolution"] = self.resolution.value
        if self.model_version is not None:
            record["model_version"] = self.model_version
        return record


@dataclass(frozen=True, slots=True)
class TrainingSnapshot:
    """Immutable, class-balanced training set used for one (re)train."""

    version: int
    example_ids: tuple[str, ...]
    positives: int
    negatives: int
    created_at: dt.datetime
    parent_version: int | None = None

    @classmethod
    def from_record(cls, record: dict) -> "TrainingSnapshot":
        return cls(
            version=int(record["version"]),
            example_ids=tuple(record["example_ids"]),
            positives=int(record["positives"]),
            negatives=int(record["negatives"]),
            created_at=_parse_ts(record.get("created_at"), "created_at"),
            parent_version=record.get("parent_version"),
        )

    def to_record(self) -> dict:
        record: dict = {
            "version": self.version,
            "example_ids": list(self.example_ids),
            "positives": self.positives,
            "negatives": self.negatives,
            "created_at": format_utc(self.created_at),
        }
        if self.parent_version is not None:
            record["parent_version"] = self.parent_version
        return record


@dataclass(frozen=True, slots=True)
class IngestReport:
    accepted: int
    rejected: tuple[tuple[str, str], ...]
