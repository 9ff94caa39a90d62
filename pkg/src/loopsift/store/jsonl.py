"""Line-oriented JSON persistence helpers."""

from __future__ import annotations

import json
import os
from pathlib import Path
from typing import Iterable, Iterator


def dump_record(record: dict) -> str:
    """Render one record as a compact, key-order-preserving JSON line."""

    return json.dumps(record, ensure_ascii=False, separators=(",", ":"))


def read_jsonl(path: Path) -> Iterator[dict]:
    """Yield records from a JSONL file, skipping blank lines."""

    if not path.exists():
        return
    with path.open("r", encoding="utf-8") as handle:
        for line in handle:
            line = line.strip()
            if line:
                yield json.loads(line)


def append_jsonl(path: Path, records: Iterable[dict]) -> None:
    """Append records durably (flush + fsync once per call)."""

    lines = [dump_record(r) for r in records]
    if not lines:
        return
    with path.open("a", encoding="utf-8") as handle:
        handle.write("\n".join(lines) + "\n")
        handle.flush()
        os.fsync(handle.fileno())
