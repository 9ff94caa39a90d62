"""File-backed model registry with an atomically swappable active entry.

Every trained model is registered; exactly one (or none) is active at a
time.  The active reference is swapped under a lock in a single
assignment, so concurrent readers always see one consistent model.  The
registry file also carries the retrain bookkeeping (last retrain time,
reviewed-example ids since) so triggers survive restarts.
"""

from __future__ import annotations

import datetime as dt
import json
import os
import threading
from dataclasses import dataclass, replace
from pathlib import Path

from ..clock import format_utc, parse_utc
from ..errors import NoModelError


@dataclass(frozen=True, slots=True)
class ModelRegistryEntry:
    version: str
    kind: str  # "MNB" or "EXTERNAL"
    path: str | None
    trained_on_snapshot: int | None
    metrics_at_train: dict | None
    registered_at: dt.datetime
    activated_at: dt.datetime | None = None

    @property
    def f1(self) -> float:
        if not self.metrics_at_train:
            return 0.0
        return float(self.metrics_at_train.get("weighted_f1", 0.0))

    def to_record(self) -> dict:
        return {
            "version": self.version,
            "kind": self.kind,
            "path": self.path,
            "trained_on_snapshot": self.trained_on_snapshot,
            "metrics_at_train": self.metrics_at_train,
            "registered_at": format_utc(self.registered_at),
            "activated_at": format_utc(self.activated_at)
            if self.activated_at
            else None,
        }

    @classmethod
    def from_record(cls, record: dict) -> "ModelRegistryEntry":
        return cls(
            version=record["version"],
            kind=record["kind"],
            path=record.get("path"),
            trained_on_snapshot=record.get("trained_on_snapshot"),
            metrics_at_train=record.get("metrics_at_train"),
            registered_at=parse_utc(record["registered_at"]),
            activated_at=parse_utc(record["activated_at"])
            if record.get("activated_at")
            else None,
        )


class ModelRegistry:
    """Thread-safe registry persisted to one JSON file."""

    def __init__(self, path: Path | str):
        self._path = Path(path)
        self._lock = threading.Lock()
        self._entries: dict[str, ModelRegistryEntry] = {}
        self._active_version: str | None = None
        self._last_retrain_at: dt.datetime | None = None
        self._reviewed_since: list[str] = []
        if self._path.exists():
            self._load()

    def _load(self) -> None:
        payload = json.loads(self._path.read_text(encoding="utf-8"))
        self._entries = {
            record["version"]: ModelRegistryEntry.from_record(record)
            for record in payload.get("entries", [])
        }
        self._active_version = payload.get("active_version")
        raw = payload.get("last_retrain_at")
        self._last_retrain_at = parse_utc(raw) if raw else None
        self._reviewed_since = list(payload.get("reviewed_since", []))

    def _save(self) -> None:
        payload = {
            "entries": [
                entry.to_record() for entry in self._entries.values()
            ],
            "active_version": self._active_version,
            "last_retrain_at": format_utc(self._last_retrain_at)
            if self._last_retrain_at
            else None,
            "reviewed_since": self._reviewed_since,
        }
        self._path.parent.mkdir(parents=True, exist_ok=True)
        tmp = self._path.with_suffix(".tmp")
        tmp.write_text(json.dumps(payload, indent=2) + "\n", encoding="utf-8")
        os.replace(tmp, self._path)

    # --- entries ----------------------------------------------------------

    def register(self, entry: ModelRegistryEntry) -> None:
        with self._lock:
            self._entries[entry.version] = entry
            self._save()

    def activate(self, version: str, at: dt.datetime) -> ModelRegistryEntry:
        with self._lock:
            if version not in self._entries:
                raise NoModelError(f"unknown model version: {version}")
            stamped = replace(self._entries[version], activated_at=at)
            self._entries[version] = stamped
            self._active_version = version
            self._save()
            return stamped

    def active(self) -> ModelRegistryEntry | None:
        with self._lock:
            if self._active_version is None:
                return None
            return self._entries.get(self._active_version)

    def get(self, version: str) -> ModelRegistryEntry | None:
        with self._lock:
            return self._entries.get(version)

    def entries(self) -> list[ModelRegistryEntry]:
        with self._lock:
            return sorted(
                self._entries.values(), key=lambda e: e.registered_at
            )

    # --- retrain bookkeeping ------------------------------------------------

    def last_retrain_at(self) -> dt.datetime | None:
        with self._lock:
            return self._last_retrain_at

    def reviewed_since(self) -> list[str]:
        with self._lock:
            return list(self._reviewed_since)

    def note_review(self, example_id: str) -> None:
        with self._lock:
            self._reviewed_since.append(example_id)
            self._save()

    def mark_retrained(self, at: dt.datetime) -> None:
        with self._lock:
            self._last_retrain_at = at
            self._reviewed_since = []
            self._save()
