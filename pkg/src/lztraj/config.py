"""Simulation configuration: JSON schema, validation, round-trip.

A config file is a single JSON object; unknown keys anywhere are
rejected so typos fail loudly instead of silently running defaults.
parse(serialize(cfg)) reproduces cfg exactly.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path

from . import dissipation, lzmodel
from .dissipation import ModelParams, TypeIParams, TypeIIParams
from .engine import StepControl
from .errors import ConfigError

_STATE_NAMES = ("e", "g", "ground", "excited")


@dataclass
class SimConfig:
    model: ModelParams
    lz: lzmodel.LzParams
    t_start: float = -100.0
    t_end: float = 100.0
    initial_state: str = "g"
    n_traj: int = 10000
    master_seed: int = 0
    step: StepControl = field(default_factory=StepControl)
    snapshots_enabled: bool = False
    snapshot_spacing: float = 1.0
    dt_bin: float = 20.0

    def __post_init__(self):
        _require_number("t_start", self.t_start)
        _require_number("t_end", self.t_end)
        if not self.t_start < self.t_end:
            raise ConfigError(f"need t_start < t_end, got ({self.t_start}, {self.t_end})")
        if self.initial_state not in _STATE_NAMES:
            raise ConfigError(f"unknown initial_state {self.initial_state!r}")
        _require_int("n_traj", self.n_traj)
        if self.n_traj < 1:
            raise ConfigError(f"n_traj must be >= 1, got {self.n_traj}")
        _require_int("master_seed", self.master_seed)
        if self.master_seed < 0:
            raise ConfigError(f"master_seed must be >= 0, got {self.master_seed}")
        span = self.t_end - self.t_start
        _check_divides("intervals.dt_bin", self.dt_bin, span)
        if self.snapshots_enabled:
            _check_divides("snapshots.grid_spacing", self.snapshot_spacing, span)
        if isinstance(self.model, TypeIIParams):
            # fail now if the spectral density overflows anywhere in the window
            for t in (self.t_start, self.t_end):
                dissipation.spectral_density(
                    lzmodel.eps_plus(t, self.lz),
                    self.model.omega_c,
                    self.model.spectral_sign,
                )

    @property
    def window(self) -> tuple[float, float]:
        return (self.t_start, self.t_end)

    @property
    def model_name(self) -> str:
        return "type1" if isinstance(self.model, TypeIParams) else "type2"

    @property
    def n_channels(self) -> int:
        return dissipation.channel_count(self.model)


def _require_number(name: str, value) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)) or not math.isfinite(value):
        raise ConfigError(f"{name} must be a finite number, got {value!r}")
    return float(value)


def _require_int(name: str, value) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise ConfigError(f"{name} must be an integer, got {value!r}")
    return value


def _check_divides(name: str, width: float, span: float) -> None:
    _require_number(name, width)
    if width <= 0:
        raise ConfigError(f"{name} must be positive, got {width}")
    n = round(span / width)
    if n < 1 or abs(n * width - span) > 1e-9:
        raise ConfigError(f"{name}={width} does not divide the window span {span}")


def _take(block: dict, context: str, known: dict) -> dict:
    """Pop known keys with defaults; reject anything left over."""
    out = {}
    work = dict(block)
    for key, default in known.items():
        out[key] = work.pop(key, default)
    if work:
        extra = ", ".join(sorted(work))
        raise ConfigError(f"unknown key(s) in {context}: {extra}")
    return out

_REQUIRED = object()


def _required(values: dict, context: str):
    for key, val in values.items():
        if val is _REQUIRED:
            raise ConfigError(f"missing required key {key!r} in {context}")


def _require_block(name: str, value) -> dict:
    if value is None:
        return {}
    if not isinstance(value, dict):
        raise ConfigError(f"{name} must be a JSON object, got {value!r}")
    return value


def parse(data: dict) -> SimConfig:
    """Build a validated SimConfig from a decoded JSON object."""
    if not isinstance(data, dict):
        raise ConfigError(f"config must be a JSON object, got {type(data).__name__}")
    top = _take(
        data,
        "config",
        {
            "model": _REQUIRED,
            "lz": _REQUIRED,
            "window": None,
            "initial_state": "g",
            "ensemble": None,
            "step": None,
            "type1": None,
            "type2": None,
            "snapshots": None,
            "intervals": None,
        },
    )
    _required(top, "config")
    name = top["model"]
    if name not in ("type1", "type2"):
        raise ConfigError(f"model must be 'type1' or 'type2', got {name!r}")
    if top["type1" if name == "type2" else "type2"] is not None:
        raise ConfigError(f"config has a parameter block for the other model than {name!r}")

    lz_block = _take(_require_block("lz", top["lz"]), "lz", {"v": _REQUIRED, "delta": 1.0})
    _required(lz_block, "lz")
    lz = lzmodel.LzParams(
        v=_require_number("lz.v", lz_block["v"]),
        delta=_require_number("lz.delta", lz_block["delta"]),
    )

    if name == "type1":
        block = _take(
            _require_block("type1", top["type1"]), "type1", {"gamma": _REQUIRED, "tau": 0.0}
        )
        _required(block, "type1")
        model: ModelParams = TypeIParams(
            gamma=_require_number("type1.gamma", block["gamma"]),
            tau=_require_number("type1.tau", block["tau"]),
        )
    else:
        block = _take(
            _require_block("type2", top["type2"]),
            "type2",
            {
                "lambda": 1.0,
                "theta": 0.0,
                "temperature": 0.0,
                "omega_c": 20.0,
                "spectral_sign": 1,
            },
        )
        model = TypeIIParams(
            lam=_require_number("type2.lambda", block["lambda"]),
            theta=_require_number("type2.theta", block["theta"]),
            temperature=_require_number("type2.temperature", block["temperature"]),
            omega_c=_require_number("type2.omega_c", block["omega_c"]),
            spectral_sign=_require_int("type2.spectral_sign", block["spectral_sign"]),
        )

    win_block = _take(
        _require_block("window", top["window"]), "window", {"t_start": -100.0, "t_end": 100.0}
    )

    ens_block = _take(
        _require_block("ensemble", top["ensemble"]),
        "ensemble",
        {"n_traj": 10000, "master_seed": 0},
    )

    step_block = _take(
        _require_block("step", top["step"]),
        "step",
        {"mode": "adaptive", "dt_max": 0.1, "eta": 0.01},
    )
    step = StepControl(
        mode=step_block["mode"],
        dt_max=_require_number("step.dt_max", step_block["dt_max"]),
        eta=_require_number("step.eta", step_block["eta"]),
    )

    snap_block = _take(
        _require_block("snapshots", top["snapshots"]),
        "snapshots",
        {"enabled": False, "grid_spacing": 1.0},
    )
    if not isinstance(snap_block["enabled"], bool):
        raise ConfigError(f"snapshots.enabled must be a boolean, got {snap_block['enabled']!r}")

    iv_block = _take(
        _require_block("intervals", top["intervals"]), "intervals", {"dt_bin": 20.0}
    )

    return SimConfig(
        model=model,
        lz=lz,
        t_start=_require_number("window.t_start", win_block["t_start"]),
        t_end=_require_number("window.t_end", win_block["t_end"]),
        initial_state=top["initial_state"],
        n_traj=ens_block["n_traj"],
        master_seed=ens_block["master_seed"],
        step=step,
        snapshots_enabled=snap_block["enabled"],
        snapshot_spacing=_require_number("snapshots.grid_spacing", snap_block["grid_spacing"]),
        dt_bin=iv_block["dt_bin"],
    )


def serialize(cfg: SimConfig) -> dict:
    """Inverse of parse: a plain dict that decodes back to an equal config."""
    out = {
        "model": cfg.model_name,
        "lz": {"v": cfg.lz.v, "delta": cfg.lz.delta},
        "window": {"t_start": cfg.t_start, "t_end": cfg.t_end},
        "initial_state": cfg.initial_state,
        "ensemble": {"n_traj": cfg.n_traj, "master_seed": cfg.master_seed},
        "step": {"mode": cfg.step.mode, "dt_max": cfg.step.dt_max, "eta": cfg.step.eta},
        "snapshots": {"enabled": cfg.snapshots_enabled, "grid_spacing": cfg.snapshot_spacing},
        "intervals": {"dt_bin": cfg.dt_bin},
    }
    if isinstance(cfg.model, TypeIParams):
        out["type1"] = {"gamma": cfg.model.gamma, "tau": cfg.model.tau}
    else:
        out["type2"] = {
            "lambda": cfg.model.lam,
            "theta": cfg.model.theta,
            "temperature": cfg.model.temperature,
            "omega_c": cfg.model.omega_c,
            "spectral_sign": cfg.model.spectral_sign,
        }
    return out


def load(path: str | Path) -> SimConfig:
    """Read and validate a JSON config file."""
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path}: {exc}") from exc
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config file {path} is not valid JSON: {exc}") from exc
    return parse(data)


def dump(cfg: SimConfig, path: str | Path) -> None:
    Path(path).write_text(
        json.dumps(serialize(cfg), indent=2, sort_keys=True) + "\n", encoding="utf-8"
    )
