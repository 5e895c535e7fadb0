"""Run configuration: every tunable constant in one flat document.

Config files are plain ``key = value`` lines ('#' starts a comment). CLI
flags override file values. All constants the pipeline depends on live here:
the 271 winning threshold and its inclusive/exclusive reading, the 1000-
replica simulation size, the null-model divisors (100, and 85 for the
modified variant), the training cutoff, and the solver knobs.
"""

from __future__ import annotations

from dataclasses import dataclass, fields, replace
from datetime import datetime
from typing import Any

from .core import GameRules


class ConfigError(Exception):
    pass


@dataclass(frozen=True)
class Config:
    cutoff: datetime | None = None
    cutoff_quantile: float | None = None  # alternative to cutoff: time quantile of games
    reference_time: datetime | None = None  # defaults to the cutoff
    n_sims: int = 1000
    seed: int = 271
    null_divisor: float = 100.0
    modified_null_divisor: float = 85.0
    logistic_l2: float = 1e-3
    augmentation_weight: float = 1.0
    threshold: int = 271
    threshold_inclusive: bool = True
    round_cap: int = 500
    strict_roster: bool = True

    def __post_init__(self):
        if self.n_sims < 1:
            raise ConfigError("n_sims must be >= 1")
        if self.null_divisor <= 0 or self.modified_null_divisor <= 0:
            raise ConfigError("divisors must be positive")
        if self.logistic_l2 < 0:
            raise ConfigError("logistic_l2 must be >= 0")
        if self.augmentation_weight <= 0:
            raise ConfigError("augmentation_weight must be positive")
        if self.threshold < 1:
            raise ConfigError("threshold must be positive")
        if self.round_cap < 1:
            raise ConfigError("round_cap must be >= 1")
        if self.cutoff_quantile is not None and not 0.0 < self.cutoff_quantile < 1.0:
            raise ConfigError("cutoff_quantile must be in (0, 1)")

    @property
    def rules(self) -> GameRules:
        return GameRules(self.threshold, self.threshold_inclusive)

    def to_dict(self) -> dict[str, Any]:
        out: dict[str, Any] = {}
        for f in fields(self):
            value = getattr(self, f.name)
            if isinstance(value, datetime):
                value = value.isoformat(timespec="minutes")
            out[f.name] = value
        return out

    @classmethod
    def from_dict(cls, raw: dict[str, Any]) -> "Config":
        known = {f.name: f for f in fields(cls)}
        kwargs: dict[str, Any] = {}
        for key, value in raw.items():
            if key not in known:
                raise ConfigError(f"unknown config key {key!r}")
            kwargs[key] = _coerce(key, value)
        return cls(**kwargs)

    def override(self, **kwargs: Any) -> "Config":
        cleaned = {k: _coerce(k, v) for k, v in kwargs.items() if v is not None}
        return replace(self, **cleaned)


_TIMESTAMP_KEYS = {"cutoff", "reference_time"}
_BOOL_KEYS = {"threshold_inclusive", "strict_roster"}
_INT_KEYS = {"n_sims", "seed", "threshold", "round_cap"}
_FLOAT_KEYS = {
    "cutoff_quantile",
    "null_divisor",
    "modified_null_divisor",
    "logistic_l2",
    "augmentation_weight",
}


def _coerce(key: str, value: Any) -> Any:
    if value is None:
        return None
    if key in _TIMESTAMP_KEYS:
        if isinstance(value, datetime):
            return value
        try:
            return datetime.fromisoformat(str(value))
        except ValueError:
            raise ConfigError(f"{key}: bad ISO timestamp {value!r}") from None
    if key in _BOOL_KEYS:
        if isinstance(value, bool):
            return value
        text = str(value).strip().lower()
        if text in ("true", "yes", "1", "on"):
            return True
        if text in ("false", "no", "0", "off"):
            return False
        raise ConfigError(f"{key}: expected a boolean, got {value!r}")
    if key in _INT_KEYS:
        try:
            return int(str(value))
        except ValueError:
            raise ConfigError(f"{key}: expected an integer, got {value!r}") from None
    if key in _FLOAT_KEYS:
        try:
            return float(str(value))
        except ValueError:
            raise ConfigError(f"{key}: expected a number, got {value!r}") from None
    raise ConfigError(f"unknown config key {key!r}")


def load_config(path: str) -> Config:
    """Parse a flat ``key = value`` config file."""
    raw: dict[str, str] = {}
    with open(path, "r", encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, start=1):
            text = line.split("#", 1)[0].strip()
            if not text:
                continue
            if "=" not in text:
                raise ConfigError(f"{path}:{line_no}: expected 'key = value'")
            key, value = (part.strip() for part in text.split("=", 1))
            raw[key] = value
    return Config.from_dict(raw)


def resolve_cutoff(config: Config, game_times: list[datetime]) -> datetime:
    """The explicit cutoff, or the configured quantile of the games' start times."""
    if config.cutoff is not None:
        return config.cutoff
    if config.cutoff_quantile is None:
        raise ConfigError("config must set either cutoff or cutoff_quantile")
    if not game_times:
        raise ConfigError("cannot take a time quantile of an empty dataset")
    ordered = sorted(game_times)
    index = min(len(ordered) - 1, int(config.cutoff_quantile * len(ordered)))
    return ordered[index]
