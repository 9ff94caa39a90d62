"""Service configuration, loadable from JSON via the LOOPSIFT_CONFIG env var."""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, field, fields
from pathlib import Path

from ..hitl.policy import RetrainPolicy, TriggerMode
from datetime import timedelta

CONFIG_ENV_VAR = "LOOPSIFT_CONFIG"


@dataclass(frozen=True, slots=True)
class ServiceConfig:
    store_root: Path = field(default=Path("store"))
    state_dir: Path = field(default=Path("state"))
    host: str = "127.0.0.1"
    port: int = 8100
    auth_token: str = ""  # empty disables bearer auth; use only in tests
    retrain_period_days: float = 7.0
    retrain_volume: int = 1000
    trigger_mode: str = "EITHER"
    slice_size: int = 500
    qc_count: int = 60
    default_language: str = "DE"
    seed: int = 0
    ui_dir: str = ""  # when set, the built moderator UI is served at /ui

    def __post_init__(self):
        object.__setattr__(self, "store_root", Path(self.store_root))
        object.__setattr__(self, "state_dir", Path(self.state_dir))
        TriggerMode(self.trigger_mode)
        if self.retrain_period_days <= 0:
            raise ValueError("retrain_period_days must be positive")
        if self.retrain_volume < 1:
            raise ValueError("retrain_volume must be >= 1")

    @property
    def retrain_policy(self) -> RetrainPolicy:
        return RetrainPolicy(
            period=timedelta(days=self.retrain_period_days),
            volume=self.retrain_volume,
            mode=TriggerMode(self.trigger_mode),
        )

    def to_record(self) -> dict:
        return {
            "store_root": str(self.store_root),
            "state_dir": str(self.state_dir),
            "host": self.host,
            "port": self.port,
            "auth_token": self.auth_token,
            "retrain_period_days": self.retrain_period_days,
            "retrain_volume": self.retrain_volume,
            "trigger_mode": self.trigger_mode,
            "slice_size": self.slice_size,
            "qc_count": self.qc_count,
            "default_language": self.default_language,
            "seed": self.seed,
            "ui_dir": self.ui_dir,
        }


def load_config(path: Path | str | None = None) -> ServiceConfig:
    """Read config JSON from `path`, the env var, or fall back to defaults."""

    if path is None:
        env = os.environ.get(CONFIG_ENV_VAR)
        if not env:
            return ServiceConfig()
        path = env
    payload = json.loads(Path(path).read_text(encoding="utf-8"))
    known = {f.name for f in fields(ServiceConfig)}
    unknown = sorted(set(payload) - known)
    if unknown:
        raise ValueError(f"unknown config keys: {unknown}")
    return ServiceConfig(**payload)
