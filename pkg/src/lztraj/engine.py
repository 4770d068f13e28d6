"""Stochastic wave-function propagation with quantum jumps.

One step of the scheme, for state phi at time t and step dt:

  * jump probability dp = i*dt*<phi|(H - H^+)|phi> with the non-Hermitian
    H = H_LZ - (i/2) lam^2 sum_m C_m^+ C_m; dp equals
    dt * lam^2 * sum_m <C_m^+ C_m> identically,
  * draw u uniform in [0, 1); if dp < u the no-jump update
    phi' = (1 - i H dt) phi / sqrt(1 - dp) applies, followed by exact
    renormalization,
  * otherwise channel m fires with probability dp_m = lam^2 dt
    <C_m^+ C_m>/dp and phi' = lam sqrt(dt/(dp dp_m)) C_m phi.

Step control: dt = eta / (eps_plus(t) + lam^2 sum_m ||C_m^+ C_m||), capped
at dt_max and shortened to land exactly on snapshot times and the window
end.  The rule is state-independent, so every trajectory of a run shares
one grid; dp < eta <= 0.1 is guaranteed along it.

`step` below is the readable scalar reference; ensembles run through the
compiled lane kernel in _kernel.py, which implements the identical
arithmetic (cross-checked in the test suite).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import TYPE_CHECKING, Callable

import numpy as np

from . import _kernel, dissipation, lzmodel, rng
from . import numerics as nm
from .dissipation import ModelParams
from .errors import ConfigError, TrajectoryError

if TYPE_CHECKING:
    from .config import SimConfig

# Per-trajectory cap on recorded jumps; generous compared to physical
# means (tens) and enforced with an explicit error, never silent loss.
EVENT_CAP = 2048
CHUNK_LANES = 8192

_LANE_ERRORS = {
    1: "jump probability reached 0.1; step control violated",
    2: "jump fired but all channel weights vanished",
    3: "event buffer overflow",
    4: "state norm collapsed or became non-finite",
}


@dataclass(frozen=True)
class StepControl:
    """Step-size policy. mode 'adaptive' uses eta over the local scale sum;
    'fixed' always proposes dt_max. Both land exactly on boundaries."""

    mode: str = "adaptive"
    dt_max: float = 0.1
    eta: float = 0.01

    def __post_init__(self):
        if self.mode not in ("adaptive", "fixed"):
            raise ConfigError(f"step.mode must be 'adaptive' or 'fixed', got {self.mode!r}")
        if not (np.isfinite(self.dt_max) and self.dt_max > 0.0):
            raise ConfigError(f"step.dt_max must be finite and > 0, got {self.dt_max!r}")
        if not (np.isfinite(self.eta) and 0.0 < self.eta <= 0.1):
            raise ConfigError(f"step.eta must lie in (0, 0.1], got {self.eta!r}")


@dataclass(frozen=True, slots=True)
class JumpEvent:
    """A recorded jump: time of the step start, 0-based channel, lane id."""

    time: float
    channel: int
    trajectory_id: int


@dataclass
class TrajectoryRecord:
    trajectory_id: int
    seed_stream: int
    events: list[JumpEvent]
    final_state: np.ndarray
    snapshot_times: np.ndarray | None = None
    snapshot_states: np.ndarray | None = None


def effective_hamiltonian(t: float, model: ModelParams, lz: lzmodel.LzParams) -> np.ndarray:
    """H_LZ(t) - (i/2) lam^2 sum_m C_m^+ C_m."""
    js = dissipation.jump_set(model, lz, t)
    lam2 = js.lam * js.lam
    acc = np.zeros((2, 2), dtype=np.complex128)
    for c in js.ops:
        acc += nm.dagger(c) @ c
    return lzmodel.hamiltonian(t, lz) - 0.5j * lam2 * acc


def step(
    phi: np.ndarray,
    t: float,
    dt: float,
    model: ModelParams,
    lz: lzmodel.LzParams,
    draw: Callable[[], float],
) -> tuple[np.ndarray, int | None]:
    """One reference stochastic step; returns (phi', fired channel or None).

    `draw` is consumed once on a no-jump step and twice on a jump step.
    Raises TrajectoryError on step-control violations.
    """
    js = dissipation.jump_set(model, lz, t)
    lam2 = js.lam * js.lam
    h = effective_hamiltonian(t, model, lz)
    z = nm.expectation(h, phi)
    dp = float((1j * dt * (z - np.conj(z))).real)
    if dp >= 0.1:
        raise TrajectoryError(f"dp={dp:.3g} at t={t:.6g} exceeds 0.1; reduce the step")
    u = draw()
    if dp < u or dp <= 0.0:
        q = phi - 1j * dt * (h @ phi)
        q = q / math.sqrt(1.0 - dp)
        return q / nm.norm(q), None
    weights = np.array(
        [lam2 * dt * nm.expectation(nm.dagger(c) @ c, phi).real for c in js.ops]
    )
    total = float(weights.sum())
    if not total > 0.0:
        raise TrajectoryError(f"jump fired at t={t:.6g} with vanishing channel weights")
    target = draw() * total
    cum = 0.0
    channel = len(weights) - 1
    for m, w in enumerate(weights):
        cum += w
        if target < cum:
            channel = m
            break
    dp_m = weights[channel] / dp
    q = js.lam * math.sqrt(dt / (dp * dp_m)) * (js.ops[channel] @ phi)
    return q, channel


def initial_state_vector(name: str, lz: lzmodel.LzParams, t_start: float) -> np.ndarray:
    """Map a config initial-state name to a state vector at t_start.

    'e'/'g' are the fixed basis states; 'ground'/'excited' are the
    instantaneous eigenstates of H(t_start).
    """
    if name == "e":
        return nm.KET_E.copy()
    if name == "g":
        return nm.KET_G.copy()
    spec = lzmodel.spectrum(t_start, lz)
    if name == "ground":
        return spec.ket_minus.copy()
    if name == "excited":
        return spec.ket_plus.copy()
    raise ConfigError(f"unknown initial state {name!r}")


def snapshot_times(cfg: SimConfig) -> np.ndarray | None:
    """Uniform snapshot grid including both window endpoints, or None."""
    if not cfg.snapshots_enabled:
        return None
    span = cfg.t_end - cfg.t_start
    n = int(round(span / cfg.snapshot_spacing))
    return np.linspace(cfg.t_start, cfg.t_end, n + 1)


def _model_arrays(model: ModelParams) -> tuple[int, np.ndarray]:
    if isinstance(model, dissipation.TypeIParams):
        return _kernel.MODEL_TYPE1, np.array([model.gamma, model.tau, 0.0, 0.0, 0.0])
    return _kernel.MODEL_TYPE2, np.array(
        [model.lam, model.theta, model.temperature, model.omega_c, float(model.spectral_sign)]
    )


def set_workers(workers: int | None) -> None:
    """Bound the kernel thread count; results never depend on it."""
    if workers is None:
        return
    if workers < 1:
        raise ConfigError(f"workers must be >= 1, got {workers}")
    import numba

    numba.set_num_threads(min(workers, numba.config.NUMBA_NUM_THREADS))


def run_ensemble(
    cfg: SimConfig,
    workers: int | None = None,
    chunk_lanes: int = CHUNK_LANES,
    event_cap: int = EVENT_CAP,
) -> list[TrajectoryRecord]:
    """Propagate cfg.n_traj trajectories; deterministic in cfg.master_seed.

    Results are independent of chunk_lanes and workers by construction
    (per-lane counter RNG and a shared, state-independent grid).
    """
    set_workers(workers)
    code, mp = _model_arrays(cfg.model)
    snap_full = snapshot_times(cfg)
    snap_interior = snap_full[1:] if snap_full is not None else np.empty(0, np.float64)
    phi0 = initial_state_vector(cfg.initial_state, cfg.lz, cfg.t_start)
    adaptive = cfg.step.mode == "adaptive"

    records: list[TrajectoryRecord] = []
    for lo in range(0, cfg.n_traj, chunk_lanes):
        ids = np.arange(lo, min(lo + chunk_lanes, cfg.n_traj), dtype=np.uint64)
        seeds = rng.stream_seeds(cfg.master_seed, ids)
        out = _kernel.run_chunk(
            code,
            mp,
            cfg.lz.v,
            cfg.lz.delta,
            cfg.t_start,
            cfg.t_end,
            adaptive,
            cfg.step.eta,
            cfg.step.dt_max,
            snap_interior,
            phi0,
            seeds,
            event_cap,
        )
        finals, ev_t, ev_c, ev_n, snaps, err, err_info, run_err, *_ = out
        if run_err == 5:
            raise ConfigError(
                "spectral weight overflow along the window; reduce the window or raise omega_c"
            )
        bad = np.nonzero(err)[0]
        if bad.size:
            i = int(bad[0])
            tid = int(ids[i])
            reason = _LANE_ERRORS.get(int(err[i]), f"error code {int(err[i])}")
            raise TrajectoryError(
                f"trajectory {tid}: {reason} (t={err_info[i, 0]:.6g}, value={err_info[i, 1]:.3g})"
            )
        for i, tid in enumerate(ids):
            tid = int(tid)
            k = int(ev_n[i])
            events = [
                JumpEvent(time=float(ev_t[i, j]), channel=int(ev_c[i, j]), trajectory_id=tid)
                for j in range(k)
            ]
            if snap_full is not None:
                states = np.empty((snap_full.size, 2), np.complex128)
                states[0] = phi0
                states[1:] = snaps[i]
                rec = TrajectoryRecord(
                    trajectory_id=tid,
                    seed_stream=int(seeds[i]),
                    events=events,
                    final_state=finals[i].copy(),
                    snapshot_times=snap_full.copy(),
                    snapshot_states=states,
                )
            else:
                rec = TrajectoryRecord(
                    trajectory_id=tid,
                    seed_stream=int(seeds[i]),
                    events=events,
                    final_state=finals[i].copy(),
                )
            records.append(rec)
    return records


def run_trajectory(cfg: SimConfig, trajectory_id: int) -> TrajectoryRecord:
    """Propagate a single trajectory; bit-identical to its ensemble lane."""
    if not (0 <= trajectory_id):
        raise ConfigError(f"trajectory_id must be >= 0, got {trajectory_id}")
    code, mp = _model_arrays(cfg.model)
    snap_full = snapshot_times(cfg)
    snap_interior = snap_full[1:] if snap_full is not None else np.empty(0, np.float64)
    phi0 = initial_state_vector(cfg.initial_state, cfg.lz, cfg.t_start)
    seeds = rng.stream_seeds(cfg.master_seed, np.array([trajectory_id], dtype=np.uint64))
    out = _kernel.run_chunk(
        code,
        mp,
        cfg.lz.v,
        cfg.lz.delta,
        cfg.t_start,
        cfg.t_end,
        cfg.step.mode == "adaptive",
        cfg.step.eta,
        cfg.step.dt_max,
        snap_interior,
        phi0,
        seeds,
        EVENT_CAP,
    )
    finals, ev_t, ev_c, ev_n, snaps, err, err_info, run_err, *_ = out
    if run_err == 5:
        raise ConfigError(
            "spectral weight overflow along the window; reduce the window or raise omega_c"
        )
    if err[0]:
        reason = _LANE_ERRORS.get(int(err[0]), f"error code {int(err[0])}")
        raise TrajectoryError(
            f"trajectory {trajectory_id}: {reason} "
            f"(t={err_info[0, 0]:.6g}, value={err_info[0, 1]:.3g})"
        )
    events = [
        JumpEvent(time=float(ev_t[0, j]), channel=int(ev_c[0, j]), trajectory_id=trajectory_id)
        for j in range(int(ev_n[0]))
    ]
    if snap_full is not None:
        states = np.empty((snap_full.size, 2), np.complex128)
        states[0] = phi0
        states[1:] = snaps[0]
        return TrajectoryRecord(
            trajectory_id=trajectory_id,
            seed_stream=int(seeds[0]),
            events=events,
            final_state=finals[0].copy(),
            snapshot_times=snap_full.copy(),
            snapshot_states=states,
        )
    return TrajectoryRecord(
        trajectory_id=trajectory_id,
        seed_stream=int(seeds[0]),
        events=events,
        final_state=finals[0].copy(),
    )


def step_stats(cfg: SimConfig) -> dict[str, float]:
    """Walk the shared grid once; returns n_steps, dt_min, dt_mean."""
    code, mp = _model_arrays(cfg.model)
    snap_full = snapshot_times(cfg)
    snap_interior = snap_full[1:] if snap_full is not None else np.empty(0, np.float64)
    run_err, n_steps, dt_min, dt_sum = _kernel.grid_stats(
        code,
        mp,
        cfg.lz.v,
        cfg.lz.delta,
        cfg.t_start,
        cfg.t_end,
        cfg.step.mode == "adaptive",
        cfg.step.eta,
        cfg.step.dt_max,
        snap_interior,
    )
    if run_err == 5:
        raise ConfigError(
            "spectral weight overflow along the window; reduce the window or raise omega_c"
        )
    return {
        "n_steps": int(n_steps),
        "dt_min": float(dt_min),
        "dt_mean": float(dt_sum / n_steps) if n_steps else 0.0,
    }
