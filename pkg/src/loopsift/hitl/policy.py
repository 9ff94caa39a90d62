"""Retraining triggers: elapsed time and reviewed-volume thresholds."""

from __future__ import annotations

from dataclasses import dataclass
from datetime import datetime, timedelta
from enum import Enum
from typing import Collection


class TriggerMode(str, Enum):
    EITHER = "EITHER"
    PERIOD_ONLY = "PERIOD_ONLY"
    VOLUME_ONLY = "VOLUME_ONLY"


@dataclass(frozen=True, slots=True)
class RetrainPolicy:
    period: timedelta = timedelta(days=7)
    volume: int = 1000
    mode: TriggerMode = TriggerMode.EITHER

    def __post_init__(self):
        if self.period <= timedelta(0):
            raise ValueError(f"period must be positive, got {self.period!r}")
        if self.volume < 1:
            raise ValueError(f"volume must be >= 1, got {self.volume}")


def check_retrain_trigger(
    policy: RetrainPolicy,
    now: datetime,
    last_retrain_at: datetime | None,
    reviewed_ids: Collection[str],
) -> tuple[bool, str | None]:
    """Returns (should_retrain, reason), reason one of "PERIOD"/"VOLUME".

    The period clock starts at the last retrain; with none recorded the
    period trigger is considered due.  Volume counts distinct reviewed
    example ids since the last retrain.  When both fire, PERIOD wins the
    reason slot.
    """

    period_due = last_retrain_at is None or now - last_retrain_at >= policy.period
    volume_due = len(set(reviewed_ids)) >= policy.volume

    if policy.mode is TriggerMode.PERIOD_ONLY:
        return (period_due, "PERIOD" if period_due else None)
    if policy.mode is TriggerMode.VOLUME_ONLY:
        return (volume_due, "VOLUME" if volume_due else None)
    if period_due:
        return (True, "PERIOD")
    if volume_due:
        return (True, "VOLUME")
    return (False, None)
