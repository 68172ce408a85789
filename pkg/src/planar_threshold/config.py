"""Run configuration: JSON file plus command-line overrides."""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field, fields
from decimal import Decimal, InvalidOperation
from typing import Any

MODES = ("sweep", "threshold", "selftest")
FORMATS = ("csv", "json")


class ConfigError(ValueError):
    def __init__(self, key: str, message: str):
        super().__init__(f"{key}: {message}")
        self.key = key


@dataclass
class RunConfig:
    mode: str = "sweep"
    distances: list[int] = field(default_factory=lambda: [8, 10, 12, 14])
    p_values: list[float] = field(default_factory=lambda: parse_p_values("0.010:0.016:0.001"))
    trials: int = 10000
    rounds: int | None = None
    seed: int | None = None
    threads: int | None = None
    output: str | None = None
    format: str = "csv"
    report: str | None = None
    decoder: str = "pymatching"
    spatial_weight: float = 1.0
    time_weight: float = 1.0
    dump_layout: str | None = None
    dump_graphs: str | None = None
    dump_events: str | None = None
    dump_trials: int = 10

    def to_dict(self) -> dict[str, Any]:
        return asdict(self)

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> "RunConfig":
        known = {f.name for f in fields(cls)}
        for key in data:
            if key not in known:
                raise ConfigError(key, "unknown configuration key")
        cfg = cls(**data)
        cfg.validate()
        return cfg

    def validate(self) -> None:
        from .montecarlo import DECODERS

        if self.mode not in MODES:
            raise ConfigError("mode", f"must be one of {MODES}, got {self.mode!r}")
        if self.format not in FORMATS:
            raise ConfigError("format", f"must be one of {FORMATS}, got {self.format!r}")
        if self.decoder not in DECODERS:
            raise ConfigError("decoder", f"must be one of {DECODERS}, got {self.decoder!r}")
        if not self.distances:
            raise ConfigError("distances", "at least one distance is required")
        for d in self.distances:
            if isinstance(d, bool) or not isinstance(d, int) or d < 2:
                raise ConfigError("distances", f"every distance must be an integer >= 2, got {d!r}")
        if not self.p_values:
            raise ConfigError("p_values", "at least one p value is required")
        for p in self.p_values:
            if not isinstance(p, (int, float)) or not 0.0 <= p <= 1.0:
                raise ConfigError("p_values", f"every p must lie in [0, 1], got {p!r}")
        if not isinstance(self.trials, int) or self.trials < 1:
            raise ConfigError("trials", f"must be an integer >= 1, got {self.trials!r}")
        if self.rounds is not None and (not isinstance(self.rounds, int) or self.rounds < 1):
            raise ConfigError("rounds", f"must be an integer >= 1, got {self.rounds!r}")
        if self.threads is not None and (not isinstance(self.threads, int) or self.threads < 1):
            raise ConfigError("threads", f"must be an integer >= 1, got {self.threads!r}")
        if self.seed is not None and (isinstance(self.seed, bool) or not isinstance(self.seed, int) or self.seed < 0):
            raise ConfigError("seed", f"must be a non-negative integer, got {self.seed!r}")
        if self.mode != "selftest" and self.seed is None:
            raise ConfigError("seed", "an explicit seed is required so results can be reproduced")
        for key in ("spatial_weight", "time_weight"):
            v = getattr(self, key)
            if not isinstance(v, (int, float)) or v < 0:
                raise ConfigError(key, f"must be a non-negative number, got {v!r}")
        if not isinstance(self.dump_trials, int) or self.dump_trials < 0:
            raise ConfigError("dump_trials", f"must be a non-negative integer, got {self.dump_trials!r}")


def parse_p_values(text: str) -> list[float]:
    """``"a:b:step"`` (both ends inclusive) or a comma-separated list."""
    text = text.strip()
    try:
        if ":" in text:
            parts = text.split(":")
            if len(parts) != 3:
                raise ConfigError("p_values", f"range must be start:stop:step, got {text!r}")
            start, stop, step = (Decimal(x) for x in parts)
            if step <= 0:
                raise ConfigError("p_values", f"step must be positive, got {step}")
            out = []
            v = start
            # Decimal arithmetic keeps the inclusive stop exact.
            while v <= stop:
                out.append(float(v))
                v += step
            return out
        return [float(Decimal(x)) for x in text.split(",") if x.strip()]
    except InvalidOperation:
        raise ConfigError("p_values", f"cannot parse {text!r}") from None


def parse_distances(text: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise ConfigError("distances", f"cannot parse {text!r}") from None
