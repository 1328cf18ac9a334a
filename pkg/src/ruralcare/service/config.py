"""Service configuration: one JSON file plus environment-variable overrides."""

import json
import os
from dataclasses import dataclass, field, replace
from pathlib import Path

from ..scheduling import CadencePolicy
from ..sync import DEFAULT_PAYLOAD_CAP, DEFAULT_TTL_SECONDS

ENV_PREFIX = "RURALCARE_"


@dataclass(frozen=True)
class ServiceConfig:
    port: int = 8470
    data_dir: str = "data"
    node_id: str = "service"
    interval_days: int = 42
    grace_days: int = 7
    distress_threshold: int = 4
    distress_instrument_id: str = "distress-thermometer"
    payload_cap: int = DEFAULT_PAYLOAD_CAP
    default_ttl_seconds: int = DEFAULT_TTL_SECONDS
    max_future_skew_s: int = 300
    pbkdf2_iterations: int = 100_000
    snapshot_every: int = 0  # events between automatic snapshots; 0 disables
    instrument_files: tuple[str, ...] = field(default=())

    @property
    def cadence(self) -> CadencePolicy:
        return CadencePolicy(interval_days=self.interval_days, grace_days=self.grace_days)

    def data_path(self) -> Path:
        return Path(self.data_dir)


_INT_FIELDS = {
    "port", "interval_days", "grace_days", "distress_threshold", "payload_cap",
    "default_ttl_seconds", "max_future_skew_s", "pbkdf2_iterations", "snapshot_every",
}
_STR_FIELDS = {"data_dir", "node_id", "distress_instrument_id"}


def load_config(path: str | os.PathLike | None = None, env: dict | None = None) -> ServiceConfig:
    """Read the config file (if given) and apply RURALCARE_* env overrides."""
    values: dict = {}
    if path is not None:
        raw = json.loads(Path(path).read_text(encoding="utf-8"))
        if not isinstance(raw, dict):
            raise ValueError("config root must be a JSON object")
        for key, value in raw.items():
            if key in _INT_FIELDS:
                values[key] = int(value)
            elif key in _STR_FIELDS:
                values[key] = str(value)
            elif key == "instrument_files":
                values[key] = tuple(str(v) for v in value)
            else:
                raise ValueError(f"unknown config key {key!r}")

    env = os.environ if env is None else env
    for key in _INT_FIELDS | _STR_FIELDS:
        env_key = ENV_PREFIX + key.upper()
        if env_key in env:
            values[key] = int(env[env_key]) if key in _INT_FIELDS else env[env_key]

    return ServiceConfig(**values)


def example_config() -> str:
    config = ServiceConfig()
    data = {
        "port": config.port,
        "data_dir": config.data_dir,
        "node_id": config.node_id,
        "interval_days": config.interval_days,
        "grace_days": config.grace_days,
        "distress_threshold": config.distress_threshold,
    }
    return json.dumps(data, indent=2) + "\n"


def with_overrides(config: ServiceConfig, **overrides) -> ServiceConfig:
    return replace(config, **{k: v for k, v in overrides.items() if v is not None})
