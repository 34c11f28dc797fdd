"""Run configuration: TOML file plus command-line overrides."""

from __future__ import annotations

import hashlib
import json
import sys
from dataclasses import asdict, dataclass, fields, replace

if sys.version_info >= (3, 11):
    import tomllib
else:  # pragma: no cover
    import tomli as tomllib

import numpy as np

from .denjoy import GOLDEN

CONSTRUCTIONS = ("denjoy", "qpf", "qpf-filled", "general", "sharkovsky", "rees")
BASES = ("rotation", "torus2", "odometer")
PINCH_MODES = ("one-sided", "oscillating")


class ConfigError(ValueError):
    """Invalid configuration (maps to exit status 2)."""


@dataclass(frozen=True)
class RunConfig:
    construction: str = "denjoy"
    base: str = "rotation"
    omega: float = GOLDEN
    omega2: float = float(np.sqrt(2.0) - 1.0)
    rho: float = float(np.sqrt(2.0) - 1.0)
    x0: float = 0.1
    theta_star: float = 0.3
    c: float = 0.25
    r: float = 1.0 / 3.0
    a0: float | None = None
    N: int = 40
    pinch: str = "one-sided"
    pinch_scale: float = 0.35
    lam: float = 0.5
    grid: int = 10_000
    depth: int = 30
    samples: int = 100_000
    horizon: int = 1000
    seed: int = 0
    out: str = "out"

    def __post_init__(self):
        self.validate()

    def validate(self):
        if self.construction not in CONSTRUCTIONS:
            raise ConfigError(f"construction must be one of {CONSTRUCTIONS}")
        if self.base not in BASES:
            raise ConfigError(f"base must be one of {BASES}")
        if self.pinch not in PINCH_MODES:
            raise ConfigError(f"pinch must be one of {PINCH_MODES}")
        for name in ("omega", "omega2", "rho", "x0", "theta_star"):
            v = getattr(self, name)
            if not 0.0 <= v < 1.0:
                raise ConfigError(f"{name} must lie in [0, 1)")
        if not (self.c > 0.0 and 0.0 < self.r < 1.0):
            raise ConfigError("weights need c > 0 and 0 < r < 1")
        first = self.c if self.a0 is None else self.a0
        if first <= 0.0 or first + 2.0 * self.c * self.r / (1.0 - self.r) >= 1.0:
            raise ConfigError("weights must be positive and sum to less than 1")
        if self.N < -1:
            raise ConfigError("N must be >= 0, or -1 to disable the blow-up")
        if not 0.0 < self.lam < 1.0:
            raise ConfigError("lam must lie in (0, 1)")
        if not 0.0 < self.pinch_scale < 0.45:
            raise ConfigError("pinch_scale must lie in (0, 0.45)")
        for name in ("grid", "depth", "samples", "horizon"):
            if getattr(self, name) < 1:
                raise ConfigError(f"{name} must be positive")
        if self.seed < 0:
            raise ConfigError("seed must be nonnegative")

    def digest(self) -> str:
        """sha256 of the configuration, output directory excluded."""
        d = asdict(self)
        d.pop("out")
        return hashlib.sha256(json.dumps(d, sort_keys=True).encode()).hexdigest()

    def as_dict(self) -> dict:
        return asdict(self)


_TYPES = {f.name: f.type for f in fields(RunConfig)}


def _coerce(name, value):
    t = _TYPES[name]
    if t == "int":
        if isinstance(value, bool) or not isinstance(value, int):
            raise ConfigError(f"{name} must be an integer")
        return value
    if t in ("float", "float | None"):
        if value is None and t == "float | None":
            return None
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            raise ConfigError(f"{name} must be a number")
        return float(value)
    if not isinstance(value, str):
        raise ConfigError(f"{name} must be a string")
    return value


def load_config(path=None, overrides: dict | None = None) -> RunConfig:
    """Read a flat TOML table (optionally nested under ``[run]``) and apply
    the non-``None`` overrides on top."""
    values = {}
    if path is not None:
        try:
            with open(path, "rb") as fh:
                raw = tomllib.load(fh)
        except (OSError, tomllib.TOMLDecodeError) as exc:
            raise ConfigError(f"cannot read config {path}: {exc}") from exc
        if "run" in raw and isinstance(raw["run"], dict):
            raw = {**{k: v for k, v in raw.items() if k != "run"}, **raw["run"]}
        for k, v in raw.items():
            if k not in _TYPES:
                raise ConfigError(f"unknown config key {k!r}")
            values[k] = _coerce(k, v)
    for k, v in (overrides or {}).items():
        if v is None:
            continue
        if k not in _TYPES:
            raise ConfigError(f"unknown option {k!r}")
        values[k] = _coerce(k, v)
    try:
        return replace(RunConfig(), **values) if values else RunConfig()
    except TypeError as exc:  # pragma: no cover - guarded by _TYPES
        raise ConfigError(str(exc)) from exc
