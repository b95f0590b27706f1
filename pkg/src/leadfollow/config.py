"""Run configuration and the flat ``key = value`` config file format.

Lines are ``key = value``; ``#`` starts a comment.  Keys prefixed with
``scenario.`` override fields of the selected scenario, e.g.
``scenario.turn_rate = 0.1``.
"""

from __future__ import annotations

import dataclasses
import math
import os
from dataclasses import dataclass, field
from pathlib import Path

from .adrc_discrete import ALPHA21_DERIVED, ALPHA21_PRINTED
from .scenarios import EQ23_CONSTANT, EQ23_LITERAL

CONTROLLERS = ("adrc-continuous", "adrc-discrete", "pid")

#: Environment variable naming the directory for relative output paths.
OUTPUT_DIR_ENV = "LEADFOLLOW_OUTPUT_DIR"


class ConfigError(ValueError):
    pass


@dataclass
class RunConfig:
    scenario: str = "1"
    controller: str = "adrc-discrete"
    ts: float = 0.01
    seed: int = 0
    out: str | None = None
    eq23: str = EQ23_LITERAL
    duration: float | None = None
    dt_plant: float = 1e-3
    # vehicle
    r: float = 0.3
    B: float = 0.7
    thetadot_max: float = 5.0
    # ADRC
    omega_cl_lat: float = 1.2
    omega_eso_lat: float = 10.0
    b0_lat: float = -2.0
    omega_cl_lon: float = 1.0
    omega_eso_lon: float = 10.0
    b0_lon: float = -1.0
    alpha21: str = ALPHA21_DERIVED
    # PI/PID
    kp_lat: float = 4.0
    ki_lat: float = 2.0
    kd_lat: float = 0.5
    n_lat: float = 50.0
    kp_lon: float = 3.0
    ki_lon: float = 3.0
    # measurement noise; None keeps the scenario's schedule
    sigma_d: float | None = None
    sigma_s: float | None = None
    # pose command
    v_fix: float = 0.5
    scenario_overrides: dict = field(default_factory=dict)

    def __post_init__(self):
        self.validate()

    def validate(self) -> None:
        if self.controller not in CONTROLLERS:
            raise ConfigError(f"controller must be one of {CONTROLLERS}, got {self.controller!r}")
        if not (math.isfinite(self.ts) and self.ts > 0):
            raise ConfigError(f"ts must be > 0, got {self.ts!r}")
        if not (math.isfinite(self.dt_plant) and self.dt_plant > 0):
            raise ConfigError(f"dt_plant must be > 0, got {self.dt_plant!r}")
        if self.eq23 not in (EQ23_LITERAL, EQ23_CONSTANT):
            raise ConfigError(f"eq23 must be {EQ23_LITERAL!r} or {EQ23_CONSTANT!r}")
        if self.alpha21 not in (ALPHA21_DERIVED, ALPHA21_PRINTED):
            raise ConfigError(f"alpha21 must be {ALPHA21_DERIVED!r} or {ALPHA21_PRINTED!r}")
        if self.duration is not None and not self.duration > 0:
            raise ConfigError("duration must be > 0")

    def output_path(self) -> Path | None:
        if self.out is None:
            return None
        path = Path(self.out)
        base = os.environ.get(OUTPUT_DIR_ENV)
        if base and not path.is_absolute():
            path = Path(base) / path
        return path

    def replace(self, **changes) -> "RunConfig":
        return dataclasses.replace(self, **changes)


def _coerce(name: str, raw: str, current):
    f = {f.name: f for f in dataclasses.fields(RunConfig)}[name]
    kind = f.type if isinstance(f.type, str) else getattr(f.type, "__name__", str(f.type))
    if raw.lower() in ("none", "") and "None" in kind:
        return None
    try:
        if kind.startswith("int"):
            return int(raw)
        if kind.startswith("float"):
            return float(raw)
    except ValueError as exc:
        raise ConfigError(f"{name}: cannot parse {raw!r}") from exc
    return raw


def _coerce_scenario_value(raw: str):
    try:
        return float(raw)
    except ValueError:
        return raw


def parse_config_text(text: str, base: RunConfig | None = None) -> RunConfig:
    values = dataclasses.asdict(base) if base else {}
    overrides = dict(values.pop("scenario_overrides", {}))
    names = {f.name for f in dataclasses.fields(RunConfig)} - {"scenario_overrides"}
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected 'key = value', got {line!r}")
        key, raw = (s.strip() for s in line.split("=", 1))
        key = key.replace("-", "_")
        if key.startswith("scenario."):
            overrides[key[len("scenario."):]] = _coerce_scenario_value(raw)
        elif key in names:
            values[key] = _coerce(key, raw, values.get(key))
        else:
            raise ConfigError(f"line {lineno}: unknown key {key!r}")
    try:
        return RunConfig(**values, scenario_overrides=overrides)
    except TypeError as exc:
        raise ConfigError(str(exc)) from exc


def load_config(path: str | os.PathLike, base: RunConfig | None = None) -> RunConfig:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    return parse_config_text(text, base)
