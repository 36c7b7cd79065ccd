"""TOML scenario configuration: parsing, defaults and validation."""

from __future__ import annotations

import re
import sys
from dataclasses import dataclass, field

import numpy as np

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

from .quantum_shield import ShieldState

SCENARIOS = (
    "duality",
    "scatter",
    "shield-classical",
    "config1",
    "config2",
    "config3",
    "fringe-scan",
)

TOP_LEVEL = {"scenario", "seed", "trials", "out", "physics", "numerics"}

PHYSICS_DEFAULTS = {
    "charge": 1.0,
    "flux": 1.0,
    "core_radius": 1e-3,
    "randomize": True,
    "impact_parameter": 1.0,
    "speed": 0.01,
    "start_distance": 10.0,
    "shield_radius": 1.0,
    "orbit_radius": 2.0,
    "excess_pairs": [-3, -2, -1, 0, 1, 2, 3],
    "amplitudes": None,
    "flux_quantum_number": 1,
    "flux_grid": None,
}

NUMERICS_DEFAULTS = {
    "n_samples": 720,
    "rel_tol": 1e-6,
    "abs_tol": 1e-12,
    "max_depth": 12,
    "nodes": 256,
    "dt": 1.0,
    "n_steps": 0,
}

REQUIRES_STATE = {"config2", "fringe-scan"}


class ConfigError(Exception):
    pass


class ParseError(ConfigError):
    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        self.line = line
        self.column = column
        where = f" (line {line}" + (f", column {column}" if column else "") + ")" if line else ""
        super().__init__(message + where)


class ValidationError(ConfigError):
    pass


@dataclass
class ScenarioConfig:
    scenario: str
    seed: int = 0
    trials: int = 100
    out: str = "out"
    physics: dict = field(default_factory=lambda: dict(PHYSICS_DEFAULTS))
    numerics: dict = field(default_factory=lambda: dict(NUMERICS_DEFAULTS))


def _line_of_key(text: str, key: str) -> int | None:
    pat = re.compile(rf"^\s*[\"']?{re.escape(key)}[\"']?\s*=", re.MULTILINE)
    m = pat.search(text)
    if m is None:
        return None
    return text.count("\n", 0, m.start()) + 1


def _reject_unknown(table: dict, allowed, text: str, section: str) -> None:
    for key in table:
        if key not in allowed:
            prefix = f"[{section}] " if section else ""
            raise ParseError(f"unknown key {prefix}{key!r}", _line_of_key(text, key))


def _parse_state(raw) -> ShieldState:
    if not isinstance(raw, dict) or not raw:
        raise ValidationError("physics.amplitudes must be a non-empty table of m = amplitude")
    amps = {}
    for k, v in raw.items():
        try:
            m = int(k)
        except ValueError:
            raise ValidationError(f"amplitude label {k!r} is not an integer") from None
        if isinstance(v, (int, float)):
            amps[m] = complex(v)
        elif isinstance(v, list) and len(v) == 2 and all(isinstance(x, (int, float)) for x in v):
            amps[m] = complex(v[0], v[1])
        else:
            raise ValidationError(f"amplitude for m={m} must be a number or [re, im]")
    return ShieldState(amps)


def _parse_grid(raw):
    if raw is None:
        return None
    if isinstance(raw, list):
        grid = [float(x) for x in raw]
    elif isinstance(raw, dict) and set(raw) == {"start", "stop", "step"}:
        start, stop, step = float(raw["start"]), float(raw["stop"]), float(raw["step"])
        if step <= 0:
            raise ValidationError("physics.flux_grid.step must be positive")
        n = int(np.floor((stop - start) / step + 1e-9)) + 1
        grid = [start + i * step for i in range(n)]
    else:
        raise ValidationError("physics.flux_grid must be a list or {start, stop, step}")
    if not grid:
        raise ValidationError("physics.flux_grid is empty")
    return grid


def parse_config(text: str, *, scenario: str | None = None) -> ScenarioConfig:
    """Parse and validate a TOML scenario document; ``scenario`` overrides the file."""
    try:
        doc = tomllib.loads(text)
    except tomllib.TOMLDecodeError as exc:
        m = re.search(r"line (\d+), column (\d+)", str(exc))
        line, col = (int(m.group(1)), int(m.group(2))) if m else (None, None)
        raise ParseError(f"malformed TOML: {exc}", line, col) from None

    _reject_unknown(doc, TOP_LEVEL, text, "")
    physics_raw = doc.get("physics", {})
    numerics_raw = doc.get("numerics", {})
    if not isinstance(physics_raw, dict) or not isinstance(numerics_raw, dict):
        raise ParseError("[physics] and [numerics] must be tables")
    _reject_unknown(physics_raw, PHYSICS_DEFAULTS, text, "physics")
    _reject_unknown(numerics_raw, NUMERICS_DEFAULTS, text, "numerics")

    name = scenario or doc.get("scenario")
    if name is None:
        raise ValidationError("no scenario given (set `scenario` or pass --scenario)")
    if name not in SCENARIOS:
        raise ValidationError(f"unknown scenario {name!r}; expected one of {', '.join(SCENARIOS)}")

    physics = dict(PHYSICS_DEFAULTS)
    physics.update(physics_raw)
    numerics = dict(NUMERICS_DEFAULTS)
    numerics.update(numerics_raw)
    # an explicit charge or flux pins the duality sweep
    if "randomize" not in physics_raw and ("charge" in physics_raw or "flux" in physics_raw):
        physics["randomize"] = False

    cfg = ScenarioConfig(
        scenario=name,
        seed=int(doc.get("seed", 0)),
        trials=int(doc.get("trials", 100)),
        out=str(doc.get("out", "out")),
        physics=physics,
        numerics=numerics,
    )
    validate(cfg, explicit=physics_raw)
    return cfg


def validate(cfg: ScenarioConfig, explicit: dict | None = None) -> None:
    p, nm = cfg.physics, cfg.numerics
    explicit = p if explicit is None else explicit
    if cfg.trials < 1:
        raise ValidationError("trials must be >= 1")
    for key in ("core_radius", "shield_radius", "orbit_radius", "speed", "start_distance"):
        if not float(p[key]) > 0:
            raise ValidationError(f"physics.{key} must be positive")
    if not p["speed"] < 0.1:
        raise ValidationError("physics.speed must be below the 0.1 c first-order cap")
    if p["orbit_radius"] <= p["shield_radius"]:
        raise ValidationError("physics.orbit_radius must exceed physics.shield_radius (charge outside)")
    if cfg.scenario == "scatter" and p["impact_parameter"] < 100 * p["core_radius"]:
        raise ValidationError("physics.impact_parameter must be at least 100 core radii")
    if nm["n_samples"] < 16:
        raise ValidationError("numerics.n_samples must be >= 16")
    if nm["nodes"] < 8:
        raise ValidationError("numerics.nodes must be >= 8")
    if not (nm["rel_tol"] > 0 and nm["abs_tol"] > 0):
        raise ValidationError("numerics tolerances must be positive")
    if not nm["dt"] > 0:
        raise ValidationError("numerics.dt must be positive")

    if cfg.scenario in REQUIRES_STATE and explicit.get("amplitudes") is None:
        raise ValidationError(f"scenario {cfg.scenario!r} requires physics.amplitudes")
    p["state"] = None if p["amplitudes"] is None else _parse_state(p["amplitudes"])
    if p["state"] is not None and abs(p["state"].norm - 1.0) > 1e-12:
        raise ValidationError("physics.amplitudes must be normalized (sum |b_m|^2 = 1)")
    p["flux_grid"] = _parse_grid(p["flux_grid"])
    if cfg.scenario == "fringe-scan" and p["flux_grid"] is None:
        raise ValidationError("scenario 'fringe-scan' requires physics.flux_grid")
    if not isinstance(p["flux_quantum_number"], int):
        raise ValidationError("physics.flux_quantum_number must be an integer")
