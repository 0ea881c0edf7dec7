"""Flat ``key=value`` experiment configuration.

Blank lines and lines starting with ``#`` are ignored.  List values are
comma separated; spacings may be written as fractions such as ``1/8``.
``beta_d_db`` accepts ``off`` to disable the direct path.
"""

from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

from ..channels import PropagationScenario
from ..link import db_to_linear


class ConfigError(ValueError):
    """Invalid configuration file or override."""


DEFAULT_SWEEPS = {
    "kronecker-distance": (1, 2, 3, 4, 5, 6, 8, 10, 12, 15, 20, 25, 30, 35, 40),
    "hardening": (1, 2, 3, 4, 5, 6, 8, 10, 12, 16, 20, 24, 28, 32, 36, 40),
}


@dataclass
class ExperimentConfig:
    n_h: int = 40
    n_v: int | None = None
    d_h: float = 0.25
    d_v: float = 0.25
    spacings: tuple[float, ...] = (0.125, 0.25, 0.5)
    sweep: tuple[int, ...] | None = None
    gain1_db: float = -75.0
    gain2_db: float = -75.0
    beta_d_db: float | None = None
    snr_budget_db: float = 124.0
    trials: int = 5000
    seed: int = 0
    epsilon: float = 0.05
    delta: float = 1e-3
    out: str | None = field(default=None, metadata={"echo": False})

    def __post_init__(self):
        self.validate()

    def validate(self):
        if self.n_h < 1 or (self.n_v is not None and self.n_v < 1):
            raise ConfigError("n_h and n_v must be >= 1")
        if not (self.d_h > 0 and self.d_v > 0):
            raise ConfigError("d_h and d_v must be positive")
        if not self.spacings or any(s <= 0 for s in self.spacings):
            raise ConfigError("spacings must be a non-empty list of positive values")
        if self.sweep is not None:
            if not self.sweep or self.sweep[0] < 1:
                raise ConfigError("sweep must list sizes >= 1")
            if any(b <= a for a, b in zip(self.sweep, self.sweep[1:])):
                raise ConfigError(f"sweep must be strictly increasing, got {self.sweep}")
        if self.trials < 1:
            raise ConfigError(f"trials must be >= 1, got {self.trials}")
        if not 0 <= self.seed < 2**64:
            raise ConfigError("seed must be an unsigned 64-bit integer")
        for name in ("gain1_db", "gain2_db", "snr_budget_db"):
            if not math.isfinite(getattr(self, name)):
                raise ConfigError(f"{name} must be finite")
        if self.beta_d_db is not None and not math.isfinite(self.beta_d_db):
            raise ConfigError("beta_d_db must be finite or 'off'")
        if not 0 < self.epsilon < 1 or not 0 < self.delta < 1:
            raise ConfigError("epsilon and delta must lie in (0, 1)")

    @property
    def n_v_eff(self) -> int:
        return self.n_h if self.n_v is None else self.n_v

    def sweep_for(self, command: str) -> tuple[int, ...]:
        return self.sweep if self.sweep is not None else DEFAULT_SWEEPS[command]

    def scenario(self) -> PropagationScenario:
        beta_d = 0.0 if self.beta_d_db is None else float(db_to_linear(self.beta_d_db))
        return PropagationScenario(
            gain1=float(db_to_linear(self.gain1_db)),
            gain2=float(db_to_linear(self.gain2_db)),
            beta_d=beta_d,
            snr_budget=float(db_to_linear(self.snr_budget_db)),
        )

    def echo(self) -> list[tuple[str, str]]:
        """``(key, value)`` pairs that reproduce this configuration when parsed."""
        pairs = []
        for f in dataclasses.fields(self):
            if not f.metadata.get("echo", True):
                continue
            pairs.append((f.name, format_value(getattr(self, f.name))))
        return pairs

    def with_overrides(self, items: dict[str, str]) -> "ExperimentConfig":
        values = dataclasses.asdict(self)
        for key, raw in items.items():
            values[key] = parse_field(key, raw)
        try:
            return ExperimentConfig(**values)
        except TypeError as exc:
            raise ConfigError(str(exc)) from exc


def format_value(value) -> str:
    if value is None:
        return "off"
    if isinstance(value, tuple):
        return ",".join(format_value(v) for v in value)
    if isinstance(value, float):
        return repr(value)
    return str(value)


def _parse_float(text: str) -> float:
    text = text.strip()
    if "/" in text:
        return float(Fraction(text))
    return float(text)


def _parse_int(text: str) -> int:
    return int(text.strip(), 0)


_PARSERS = {
    "n_h": _parse_int,
    "n_v": lambda t: None if t.strip().lower() in ("off", "none", "") else _parse_int(t),
    "d_h": _parse_float,
    "d_v": _parse_float,
    "spacings": lambda t: tuple(_parse_float(p) for p in t.split(",")),
    "sweep": lambda t: None
    if t.strip().lower() in ("off", "none", "")
    else tuple(_parse_int(p) for p in t.split(",")),
    "gain1_db": _parse_float,
    "gain2_db": _parse_float,
    "beta_d_db": lambda t: None if t.strip().lower() in ("off", "none", "-inf") else _parse_float(t),
    "snr_budget_db": _parse_float,
    "trials": _parse_int,
    "seed": _parse_int,
    "epsilon": _parse_float,
    "delta": _parse_float,
    "out": lambda t: t.strip() or None,
}


def parse_field(key: str, raw: str):
    key = key.strip()
    if key not in _PARSERS:
        raise ConfigError(f"unknown configuration key {key!r}")
    try:
        return _PARSERS[key](raw)
    except (ValueError, ZeroDivisionError) as exc:
        raise ConfigError(f"{key}: cannot parse {raw.strip()!r} ({exc})") from exc


def split_assignment(text: str, where: str = "") -> tuple[str, str]:
    if "=" not in text:
        raise ConfigError(f"{where}expected key=value, got {text.strip()!r}")
    key, _, value = text.partition("=")
    return key.strip(), value


def parse_lines(lines, source: str = "<config>") -> dict[str, str]:
    items: dict[str, str] = {}
    for lineno, line in enumerate(lines, start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        where = f"{source}:{lineno}: "
        key, value = split_assignment(stripped, where)
        if key not in _PARSERS:
            raise ConfigError(f"{where}unknown configuration key {key!r}")
        try:
            parse_field(key, value)
        except ConfigError as exc:
            raise ConfigError(f"{where}{exc}") from exc
        items[key] = value
    return items


def load_config(path=None, overrides: dict[str, str] | None = None) -> ExperimentConfig:
    """Build a configuration from an optional file plus overrides (later wins)."""
    items: dict[str, str] = {}
    if path is not None:
        path = Path(path)
        try:
            text = path.read_text()
        except OSError as exc:
            raise ConfigError(f"cannot read config {path}: {exc}") from exc
        items.update(parse_lines(text.splitlines(), str(path)))
    items.update(overrides or {})
    return ExperimentConfig().with_overrides(items)
