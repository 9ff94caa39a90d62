"""Injectable time source.

Experiments and cycle runs must be bit-identical across machines, so any
component that stamps records takes a :class:`Clock` instead of calling
``datetime.now`` directly.  The HTTP service uses :class:`SystemClock`;
batch runs use a :class:`LogicalClock` seeded from corpus metadata.
"""

from __future__ import annotations

import datetime as dt
from typing import Protocol

UTC = dt.timezone.utc


class Clock(Protocol):
    def now(self) -> dt.datetime: ...


class SystemClock:
    """Wall clock, always UTC."""

    def now(self) -> dt.datetime:
        return dt.datetime.now(tz=UTC)


class LogicalClock:
    """Deterministic clock that advances only when told to.

    Each ``now()`` call returns a strictly later instant (one second per
    call) so records created in sequence keep a total order.
    """

    def __init__(self, start: dt.datetime):
        if start.tzinfo is None:
            start = start.replace(tzinfo=UTC)
        self._current = start.astimezone(UTC)

    def now(self) -> dt.datetime:
        value = self._current
        self._current = value + dt.timedelta(seconds=1)
        return value

    def advance(self, delta: dt.timedelta) -> None:
        self._current = self._current + delta

    def jump_to(self, instant: dt.datetime) -> None:
        if instant.tzinfo is None:
            instant = instant.replace(tzinfo=UTC)
        instant = instant.astimezone(UTC)
        if instant > self._current:
            self._current = instant


def parse_utc(value: str) -> dt.datetime:
    """Parse an ISO-8601 UTC timestamp, accepting the ``Z`` suffix."""

    text = value.strip()
    if text.endswith(("Z", "z")):
        text = text[:-1] + "+00:00"
    parsed = dt.datetime.fromisoformat(text)
    if parsed.tzinfo is None:
        raise ValueError(f"timestamp lacks timezone: {value!r}")
    return parsed.astimezone(UTC)


def format_utc(value: dt.datetime) -> str:
    """Render a UTC timestamp as ISO-8601 with the ``Z`` suffix."""

    if value.tzinfo is None:
        raise ValueError("naive datetime")
    value = value.astimezone(UTC)
    if value.microsecond:
        return value.strftime("%Y-%m-%dT%H:%M:%S.%f") + "Z"
    return value.strftime("%Y-%m-%dT%H:%M:%SZ")
