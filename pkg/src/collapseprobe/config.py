"""Experiment configuration: loading, validation and default filling.

A config is a flat YAML (or JSON) mapping. ``command`` is required; every
other key has a per-command default, and every default that gets applied is
recorded in :attr:`ExperimentConfig.defaults_applied`. A JSON sidecar
written by the CLI is accepted as a config too: its ``config`` block is
used verbatim.
"""

import json
import math
from dataclasses import dataclass, field
from pathlib import Path

import yaml

from .errors import ConfigError

COMMANDS = (
    "single-qubit-dynamics",
    "sse-check",
    "two-qubit-qfi",
    "optimize",
    "ising-scan",
    "h-scan",
    "size-scan",
    "delta-g",
    "gap",
)
ISING_COMMANDS = ("ising-scan", "h-scan", "size-scan", "delta-g")
FIXED_TIME_COMMANDS = ("two-qubit-qfi",) + ISING_COMMANDS
MODELS = ("single-qubit", "two-qubit", "ising")

QUBIT_DEFAULTS = {"omega0": 1.0}
TWO_QUBIT_DEFAULTS = {"omega0": 1.0, "omega_p": 0.3, "g": 0.2, "beta": 0.01}
ISING_DEFAULTS = {
    "N": 4, "h": 1.0, "J": 1.0, "h_p": 0.5, "J_p": 0.5, "beta": 0.1,
    "theta": math.pi, "phi": 0.0, "noise": "local", "rc_over_a": 2.0,
}

# command-specific defaults on top of the model family ones
COMMAND_DEFAULTS = {
    "single-qubit-dynamics": {
        "lambda": 0.1, "theta": math.pi / 4, "phi": math.pi / 4,
        "grid": {"min": 0.0, "max": 50.0, "points": 501, "spacing": "linear"},
    },
    "sse-check": {
        "lambda": 0.1, "theta": math.pi / 4, "phi": math.pi / 4, "t_final": 5.0,
        "dt": 1e-3, "n_traj": 2000, "samples": 10, "seed": 0,
    },
    "two-qubit-qfi": {
        "theta": math.pi / 4, "phi": math.pi / 4,
        "grid": {"min": 0.05, "max": 0.5, "points": 10, "spacing": "linear"},
    },
    "optimize": {
        "model": "two-qubit", "lambda": 0.1, "phi": math.pi / 4,
        "t_window": [0.0, 100.0], "table1": False,
    },
    "ising-scan": {
        "grid": {"min": 1e-5, "max": 1e-3, "points": 20, "spacing": "log"},
        "h_values": [1.0], "reoptimize": False,
    },
    "h-scan": {
        "lambda": 1e-3,
        "grid": {"min": 0.9, "max": 1.1, "points": 21, "spacing": "linear"},
    },
    "size-scan": {"lambda": 0.1, "sizes": [2, 3, 4, 5]},
    "delta-g": {
        "noise": "correlated",
        "grid": {"min": 1e-5, "max": 1e-3, "points": 20, "spacing": "log"},
    },
    "gap": {"model": "single-qubit", "lambda": 0.1},
}

REAL_KEYS = {
    "omega0", "omega_p", "g", "beta", "h", "J", "h_p", "J_p", "theta", "phi",
    "rc_over_a", "lambda", "t", "t_final", "dt",
}
INT_KEYS = {"N", "n_traj", "samples", "seed"}
BOOL_KEYS = {"table1", "reoptimize"}
LIST_KEYS = {"t_window", "h_values", "sizes", "dissipated_sites"}
ALL_KEYS = (
    {"command", "model", "noise", "grid"} | REAL_KEYS | INT_KEYS | BOOL_KEYS | LIST_KEYS
)
GRID_KEYS = {"min", "max", "points", "spacing"}


@dataclass
class ExperimentConfig:
    command: str
    params: dict
    defaults_applied: list = field(default_factory=list)

    def __getitem__(self, key):
        return self.params[key]

    def get(self, key, default=None):
        return self.params.get(key, default)

    @property
    def family(self):
        if self.command in ISING_COMMANDS:
            return "ising"
        if self.command in ("optimize", "gap"):
            return self.params["model"]
        if self.command == "two-qubit-qfi":
            return "two-qubit"
        return "single-qubit"

    @property
    def units(self):
        return "J" if self.family == "ising" else "omega0"

    def resolved(self):
        """Plain mapping that reloads to an identical config."""
        return {"command": self.command, **self.params}


def parse_text(text):
    """Parse JSON or YAML text into Python objects; empty text gives ``{}``."""
    if not text.strip():
        return {}
    try:
        return json.loads(text)
    except json.JSONDecodeError:
        pass
    try:
        return yaml.safe_load(text)
    except yaml.YAMLError as exc:
        raise ConfigError([f"unparseable config: {exc}".replace("\n", " ")]) from exc


def _as_real(value):
    # YAML 1.1 reads "1e-5" as a string
    if isinstance(value, bool):
        raise ValueError
    if isinstance(value, str):
        value = float(value.strip())
    value = float(value)
    if not math.isfinite(value):
        raise ValueError
    return value


def _as_int(value):
    if isinstance(value, bool):
        raise ValueError
    real = _as_real(value)
    if real != int(real):
        raise ValueError
    return int(real)


def _check_grid(grid, errors):
    if not isinstance(grid, dict):
        errors.append("grid: must be a mapping with min, max, points, spacing")
        return None
    unknown = set(grid) - GRID_KEYS
    if unknown:
        errors.append(f"grid: unknown keys {sorted(unknown)}")
    out = {}
    for key in ("min", "max"):
        try:
            out[key] = _as_real(grid.get(key))
        except (TypeError, ValueError):
            errors.append(f"grid.{key}: required real number")
    try:
        out["points"] = _as_int(grid.get("points"))
        if out["points"] < 2:
            errors.append("grid.points: must be >= 2")
    except (TypeError, ValueError):
        errors.append("grid.points: required integer")
    out["spacing"] = grid.get("spacing", "linear")
    if out["spacing"] not in ("linear", "log"):
        errors.append("grid.spacing: must be 'linear' or 'log'")
    if "min" in out and "max" in out:
        if not out["min"] < out["max"]:
            errors.append("grid: min must be < max")
        if out["spacing"] == "log" and out["min"] <= 0:
            errors.append("grid.min: must be > 0 for log spacing")
    return out


def _validate(p, command, errors):
    """Range checks on already-typed values."""
    def need(key, ok, msg):
        if key in p and not ok(p[key]):
            errors.append(f"{key}: {msg}")

    for key in ("omega0", "omega_p", "h", "J", "beta", "rc_over_a", "dt", "t_final"):
        need(key, lambda v: v > 0, "must be > 0")
    need("g", lambda v: v >= 0, "must be >= 0")
    need("lambda", lambda v: v >= 0, "must be >= 0")
    need("t", lambda v: v >= 0, "must be >= 0")
    need("theta", lambda v: 0 <= v <= math.pi, "must lie in [0, pi]")
    need("phi", lambda v: 0 <= v <= 2 * math.pi, "must lie in [0, 2pi]")
    need("N", lambda v: 1 <= v <= 6, "must be an integer in 1..6")
    need("n_traj", lambda v: v >= 1, "must be >= 1")
    need("samples", lambda v: v >= 1, "must be >= 1")
    need("seed", lambda v: 0 <= v < 2**64, "must be an unsigned 64-bit integer")
    need("noise", lambda v: v in ("local", "correlated"), "must be 'local' or 'correlated'")
    need("model", lambda v: v in MODELS, f"must be one of {list(MODELS)}")
    if "t_window" in p:
        w = p["t_window"]
        if len(w) != 2 or not 0 <= w[0] < w[1]:
            errors.append("t_window: must be [t_min, t_max] with 0 <= t_min < t_max")
    need("sizes", lambda v: len(v) >= 1 and all(1 <= n <= 6 for n in v)
         and all(a < b for a, b in zip(v, v[1:])), "must be increasing integers in 1..6")
    need("h_values", lambda v: len(v) >= 1 and all(x > 0 for x in v), "must be positive")
    if "dissipated_sites" in p and "N" in p:
        n = p["N"]
        probe = [s for s in p["dissipated_sites"] if s == n + 1]
        if probe:
            errors.append(f"dissipated_sites: site {n + 1} is the probe, which never collapses")
        bad = [s for s in p["dissipated_sites"] if not 1 <= s <= n]
        if bad and not probe:
            errors.append(f"dissipated_sites: {bad} are not chain sites 1..{n}")
        if not p["dissipated_sites"]:
            errors.append("dissipated_sites: must name at least one site")
    if command == "size-scan" and "dissipated_sites" in p:
        errors.append("dissipated_sites: not supported by size-scan (N varies)")
    if command == "sse-check" and {"dt", "omega0"} <= set(p) and p["dt"] * p["omega0"] > 1e-2:
        errors.append("dt: must satisfy dt * omega0 <= 1e-2")


def _family_defaults(command, raw):
    if command in ISING_COMMANDS:
        return ISING_DEFAULTS
    model = raw.get("model", COMMAND_DEFAULTS.get(command, {}).get("model"))
    if command == "two-qubit-qfi" or model == "two-qubit":
        return TWO_QUBIT_DEFAULTS
    if model == "ising":
        return ISING_DEFAULTS
    return QUBIT_DEFAULTS


def _allowed_keys(command, raw):
    family = set(_family_defaults(command, raw)) | set(COMMAND_DEFAULTS.get(command, {}))
    family |= {"command"}
    if command in FIXED_TIME_COMMANDS:
        family |= {"t"}
    if command in ISING_COMMANDS or raw.get("model") == "ising":
        family |= {"dissipated_sites"}
    if command in ("optimize", "gap"):
        family |= {"model"}
    if command in ("gap",) and raw.get("model") == "ising":
        family |= set(ISING_DEFAULTS)
    return family


def parse_config(raw):
    """Validate a raw mapping; raises :class:`ConfigError` listing every problem."""
    if raw is None:
        raw = {}
    if not isinstance(raw, dict):
        raise ConfigError(["config must be a mapping of keys to values"])
    if "schema_version" in raw:  # a CLI sidecar
        raw = raw.get("config") or {}
    errors = []
    command = raw.get("command")
    if command is None:
        raise ConfigError(["command: required field is missing"])
    if command not in COMMANDS:
        raise ConfigError([f"command: unknown command {command!r}, expected one of {list(COMMANDS)}"])

    unknown = sorted(set(raw) - ALL_KEYS)
    if unknown:
        errors.append(f"unknown keys {unknown}")
    foreign = sorted((set(raw) & ALL_KEYS) - _allowed_keys(command, raw))
    if foreign:
        errors.append(f"keys {foreign} do not apply to command {command!r}")

    params, applied = {}, []
    defaults = {**_family_defaults(command, raw), **COMMAND_DEFAULTS.get(command, {})}
    if command == "optimize" and raw.get("model") == "ising":
        defaults.update(phi=0.0, t_window=[0.0, 1000.0])
    for key in sorted(set(defaults) | (set(raw) & ALL_KEYS) - {"command"}):
        if key in raw:
            value = raw[key]
        else:
            value = defaults[key]
            applied.append(key)
        try:
            if key in REAL_KEYS:
                value = _as_real(value)
            elif key in INT_KEYS:
                value = _as_int(value)
            elif key in BOOL_KEYS:
                if not isinstance(value, bool):
                    raise ValueError
            elif key == "t_window" or key == "h_values":
                value = [_as_real(v) for v in value]
            elif key in ("sizes", "dissipated_sites"):
                value = [_as_int(v) for v in value]
            elif key == "grid":
                value = _check_grid(value, errors)
                if value is None:
                    continue
            elif not isinstance(value, str):
                raise ValueError
        except (TypeError, ValueError):
            errors.append(f"{key}: invalid value {value!r}")
            continue
        params[key] = value

    _validate(params, command, errors)
    if command == "optimize" and params.get("table1") and params.get("model") != "ising":
        errors.append("table1: requires model 'ising'")
    if command == "delta-g" and params.get("noise") != "correlated":
        errors.append("noise: delta-g compares correlated against local noise, set 'correlated'")
    if errors:
        raise ConfigError(errors)
    return ExperimentConfig(command, params, applied)


def load_config(source):
    """Load a config from a path or from inline YAML/JSON text."""
    if isinstance(source, Path) or (isinstance(source, str) and "\n" not in source
                                    and Path(source).is_file()):
        try:
            text = Path(source).read_text()
        except OSError as exc:
            raise ConfigError([f"cannot read config: {exc}"]) from exc
    else:
        text = source
    return parse_config(parse_text(text))
