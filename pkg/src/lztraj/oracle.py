"""Deterministic reference integrations used to validate trajectory output.

integrate_master propagates the Lindblad master equation

    drho/dt = -i [H_LZ(t), rho] + lam^2 sum_m (C rho C^+ - {C^+C, rho}/2)

with classic RK4, re-evaluating the time-dependent jump operators at each
stage, on steps h = step_scale * min(0.1/eps_plus(t), 0.01) that land
exactly on the requested sample times.  Physical invariants are enforced
at every sample: Hermiticity defect <= 1e-10, |trace - 1| <= 1e-8 and
smallest eigenvalue >= -1e-8, aborting with the offending time otherwise.

integrate_schrodinger is the closed-system (gamma = 0) reference on the
same step rule; it never renormalizes, so its norm drift measures the
integrator error directly.

This module never touches the stochastic engine; agreement between the
two routes is established only by the tests and the validate command.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import dissipation, lzmodel
from .dissipation import ModelParams
from .errors import OracleError
from .numerics import density_checks


@dataclass
class DensityTrajectory:
    """Sampled master-equation solution plus the expected jump count.

    expected_jumps is the time integral of the total jump rate
    lam^2 sum_m tr(C_m^+ C_m rho(t)), i.e. the mean number of jumps an
    unraveling of this equation should record per trajectory.
    """

    times: np.ndarray
    rhos: np.ndarray
    expected_jumps: float


def _ops_at(model: ModelParams, lz: lzmodel.LzParams, t: float):
    js = dissipation.jump_set(model, lz, t)
    lam2 = js.lam * js.lam
    pairs = [(c, c.conj().T @ c) for c in js.ops]
    return lzmodel.hamiltonian(t, lz), lam2, pairs


def _rhs(h: np.ndarray, lam2: float, pairs, rho: np.ndarray) -> np.ndarray:
    out = -1j * (h @ rho - rho @ h)
    for c, ctc in pairs:
        out += lam2 * (c @ rho @ c.conj().T - 0.5 * (ctc @ rho + rho @ ctc))
    return out


def _jump_rate(lam2: float, pairs, rho: np.ndarray) -> float:
    acc = 0.0
    for _, ctc in pairs:
        acc += float(np.trace(ctc @ rho).real)
    return lam2 * acc


def _check(rho: np.ndarray, t: float) -> None:
    defect, tr_err, neg = density_checks(rho)
    if defect > 1e-10:
        raise OracleError(f"Hermiticity defect {defect:.3e} at t={t:.6g}")
    if tr_err > 1e-8:
        raise OracleError(f"trace error {tr_err:.3e} at t={t:.6g}")
    if neg < -1e-8:
        raise OracleError(f"negative eigenvalue {neg:.3e} at t={t:.6g}")


def master_step_size(t: float, lz: lzmodel.LzParams, step_scale: float) -> float:
    """RK4 step bound min(0.1/eps_plus, 0.01), scaled."""
    return step_scale * min(0.1 / lzmodel.eps_plus(t, lz), 0.01)


def integrate_master(
    model: ModelParams,
    lz: lzmodel.LzParams,
    rho0: np.ndarray,
    t_start: float,
    t_end: float,
    sample_times: np.ndarray,
    step_scale: float = 1.0,
) -> DensityTrajectory:
    """Master-equation solution sampled on sample_times (ascending,
    inside [t_start, t_end]; t_start itself may be the first sample)."""
    samples = np.asarray(sample_times, dtype=np.float64)
    if samples.size and (samples[0] < t_start - 1e-12 or samples[-1] > t_end + 1e-12):
        raise OracleError("sample times outside the integration window")
    rho = np.array(rho0, dtype=np.complex128)
    out = np.empty((samples.size, 2, 2), np.complex128)
    s_idx = 0
    while s_idx < samples.size and samples[s_idx] <= t_start:
        _check(rho, t_start)
        out[s_idx] = rho
        s_idx += 1
    t = t_start
    expected = 0.0
    h_mat, lam2, pairs = _ops_at(model, lz, t)
    while t < t_end:
        h = master_step_size(t, lz, step_scale)
        tb = samples[s_idx] if s_idx < samples.size else t_end
        landed = t + h >= tb
        if landed:
            h = tb - t
        mid_mat, _, mid_pairs = _ops_at(model, lz, t + 0.5 * h)
        end_mat, _, end_pairs = _ops_at(model, lz, t + h)
        k1 = _rhs(h_mat, lam2, pairs, rho)
        k2 = _rhs(mid_mat, lam2, mid_pairs, rho + (0.5 * h) * k1)
        k3 = _rhs(mid_mat, lam2, mid_pairs, rho + (0.5 * h) * k2)
        k4 = _rhs(end_mat, lam2, end_pairs, rho + h * k3)
        rate_a = _jump_rate(lam2, pairs, rho)
        rho = rho + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        rate_b = _jump_rate(lam2, end_pairs, rho)
        expected += 0.5 * h * (rate_a + rate_b)
        h_mat, pairs = end_mat, end_pairs
        if landed:
            t = tb
            if s_idx < samples.size:
                _check(rho, t)
                out[s_idx] = rho
                s_idx += 1
        else:
            t = t + h
    return DensityTrajectory(times=samples.copy(), rhos=out, expected_jumps=expected)


def integrate_schrodinger(
    lz: lzmodel.LzParams,
    phi0: np.ndarray,
    t_start: float,
    t_end: float,
    step_scale: float = 1.0,
) -> np.ndarray:
    """Closed-system final state at t_end; not renormalized on purpose."""
    p0 = complex(phi0[0])
    p1 = complex(phi0[1])
    v = lz.v
    delta = lz.delta
    t = t_start

    def deriv(tt, a, b):
        w = v * tt
        return -1j * (w * a + delta * b), -1j * (delta * a - w * b)

    while t < t_end:
        eps = np.sqrt((v * t) ** 2 + delta * delta)
        h = step_scale * min(0.1 / eps, 0.01)
        if t + h >= t_end:
            h = t_end - t
            t_next = t_end
        else:
            t_next = t + h
        k1a, k1b = deriv(t, p0, p1)
        k2a, k2b = deriv(t + 0.5 * h, p0 + 0.5 * h * k1a, p1 + 0.5 * h * k1b)
        k3a, k3b = deriv(t + 0.5 * h, p0 + 0.5 * h * k2a, p1 + 0.5 * h * k2b)
        k4a, k4b = deriv(t + h, p0 + h * k3a, p1 + h * k3b)
        p0 = p0 + (h / 6.0) * (k1a + 2.0 * k2a + 2.0 * k3a + k4a)
        p1 = p1 + (h / 6.0) * (k1b + 2.0 * k2b + 2.0 * k3b + k4b)
        t = t_next
    return np.array([p0, p1], dtype=np.complex128)


def ensemble_density(records) -> tuple[np.ndarray, np.ndarray]:
    """Average |phi><phi| over trajectory snapshots.

    All records must carry snapshots on the same time grid.  Returns
    (times, rho_hat) with rho_hat of shape (n_times, 2, 2).
    """
    if not records:
        raise ValueError("no trajectory records")
    first = records[0].snapshot_times
    if first is None:
        raise ValueError("records carry no snapshots")
    for r in records:
        if r.snapshot_times is None or not np.array_equal(r.snapshot_times, first):
            raise ValueError("records disagree on the snapshot grid")
    stack = np.stack([r.snapshot_states for r in records])  # (n_traj, n_t, 2)
    rho = np.einsum("rti,rtj->tij", stack, stack.conj()) / len(records)
    return first.copy(), rho
