"""Compiled batch propagation of jump trajectories.

Layout: the adaptive step rule depends only on time, never on the state,
so one serial "walker" builds the time grid and per-step propagator
entries in blocks, and all trajectory lanes consume the same block table.
Lanes are fully independent (counter-based RNG, no shared mutable state),
which makes ensemble results bit-identical for any chunking, lane order or
thread count.

Everything here mirrors the readable implementations in lzmodel.py,
dissipation.py and engine.py; tests assert agreement between the two
routes.  Keep formulas and operation order in sync when editing.

Error codes (per lane unless noted): 1 = dp exceeded 0.1, 2 = jump fired
with no available channel weight, 3 = event buffer overflow, 4 = state
lost normalizability, 5 = spectral-weight overflow (whole run).
"""

from __future__ import annotations

import math

import numpy as np
from numba import njit, prange

U64 = np.uint64
GOLDEN = U64(0x9E3779B97F4A7C15)
MIX_1 = U64(0xBF58476D1CE4E5B9)
MIX_2 = U64(0x94D049BB133111EB)
S30 = U64(30)
S27 = U64(27)
S31 = U64(31)
S11 = U64(11)
ONE = U64(1)
INV53 = 1.0 / 9007199254740992.0

EXP_GUARD = 700.0
BLOCK = 4096

MODEL_TYPE1 = 1
MODEL_TYPE2 = 2

# table columns: t, dt, m00r, m00i, m01r, m01i, m11r, m11i, a00, a01, a11
_NCOL = 11


@njit(cache=True, inline="always")
def _mix64(z):
    z = (z ^ (z >> S30)) * MIX_1
    z = (z ^ (z >> S27)) * MIX_2
    return z ^ (z >> S31)


@njit(cache=True, inline="always")
def _draw(stream, ctr):
    h = _mix64(stream + (ctr + ONE) * GOLDEN)
    return np.float64(h >> S11) * INV53


@njit(cache=True, inline="always")
def _spectrum_scalars(v, delta, t):
    """eps, kp0, kp1, km0, km1 of the instantaneous eigenbasis (all real)."""
    w = v * t
    eps = math.sqrt(w * w + delta * delta)
    a = eps + abs(w)
    b = (delta * delta) / a
    if w >= 0.0:
        q = b
        s = a
    else:
        q = a
        s = b
    np_ = math.sqrt(2.0 * eps * q)
    nm_ = math.sqrt(2.0 * eps * s)
    return eps, delta / np_, q / np_, delta / nm_, -s / nm_


@njit(cache=True)
def _type2_scalars(v, delta, t, theta, temperature, omega_c, sign):
    """Per-time scalars of the eigenbasis model.

    Returns (ok, eps, kp0, kp1, km0, km1, a1, a3, a3p, g1, g2, g3);
    ok is False when the spectral-weight exponent would overflow.
    """
    eps, kp0, kp1, km0, km1 = _spectrum_scalars(v, delta, t)
    ct = math.cos(theta)
    st = math.sin(theta)
    a1 = 0.5 * (ct * (km0 * kp0 - km1 * kp1) + st * (km0 * kp1 + km1 * kp0))
    a3 = 0.5 * (ct * (km0 * km0 - km1 * km1) + st * (2.0 * km0 * km1))
    a3p = 0.5 * (ct * (kp0 * kp0 - kp1 * kp1) + st * (2.0 * kp0 * kp1))
    x = sign * 2.0 * eps / omega_c
    if x > EXP_GUARD:
        return False, eps, kp0, kp1, km0, km1, a1, a3, a3p, 0.0, 0.0, 0.0
    j = 2.0 * eps * math.exp(x)
    if temperature == 0.0:
        n = 0.0
    else:
        xb = 2.0 * eps / temperature
        n = 0.0 if xb > EXP_GUARD else 1.0 / math.expm1(xb)
    g1 = 2.0 * math.pi * j * (n + 1.0)
    g2 = 2.0 * math.pi * j * n
    g3 = 2.0 * math.pi * temperature
    return True, eps, kp0, kp1, km0, km1, a1, a3, a3p, g1, g2, g3


@njit(cache=True)
def _grid_entries(model_code, mp, v, delta, t):
    """(ok, eps, g00, g01, g11, rsum) at time t.

    g is the lam^2-weighted sum of C^+C (real symmetric here); rsum is the
    lam^2-weighted sum of the channel spectral norms used by step control.
    """
    if model_code == MODEL_TYPE1:
        gamma = mp[0]
        tau = mp[1]
        w = v * t
        eps = math.sqrt(w * w + delta * delta)
        g00 = gamma * (1.0 + tau)
        g11 = gamma * tau
        return True, eps, g00, 0.0, g11, g00 + g11
    ok, eps, kp0, kp1, km0, km1, a1, a3, a3p, g1, g2, g3 = _type2_scalars(
        v, delta, t, mp[1], mp[2], mp[3], mp[4]
    )
    if not ok:
        return False, eps, 0.0, 0.0, 0.0, 0.0
    lam2 = mp[0] * mp[0]
    alpha = g1 * a1 * a1 + g3 * a3p * a3p
    beta = g2 * a1 * a1 + g3 * a3 * a3
    g00 = lam2 * (alpha * kp0 * kp0 + beta * km0 * km0)
    g01 = lam2 * (alpha * kp0 * kp1 + beta * km0 * km1)
    g11 = lam2 * (alpha * kp1 * kp1 + beta * km1 * km1)
    mx = a3 * a3 if a3 * a3 > a3p * a3p else a3p * a3p
    rsum = lam2 * (g1 * a1 * a1 + g2 * a1 * a1 + g3 * mx)
    return True, eps, g00, g01, g11, rsum


@njit(cache=True)
def _apply_jump(model_code, mp, v, delta, t, dt, dp, u2, p0, p1):
    """Select a channel by inverse CDF over the weights and apply it.

    Returns (ok, channel, new0, new1).  The new state follows the exact
    jump normalization lam * sqrt(dt / (dp * dp_m)) C_m phi.
    """
    zero = 0.0 + 0.0j
    if model_code == MODEL_TYPE1:
        lam2 = mp[0]  # lam = sqrt(gamma), lam^2 = gamma exactly
        tau = mp[1]
        n0 = p0.real * p0.real + p0.imag * p0.imag
        n1 = p1.real * p1.real + p1.imag * p1.imag
        w1 = lam2 * dt * (1.0 + tau) * n0
        w2 = lam2 * dt * tau * n1
        total = w1 + w2
        if not (total > 0.0):
            return False, -1, p0, p1
        lam = math.sqrt(lam2)
        if u2 * total < w1:
            scale = lam * math.sqrt(dt / (dp * (w1 / dp)))
            return True, 0, zero, math.sqrt(1.0 + tau) * scale * p0
        scale = lam * math.sqrt(dt / (dp * (w2 / dp)))
        return True, 1, math.sqrt(tau) * scale * p1, zero
    ok, eps, kp0, kp1, km0, km1, a1, a3, a3p, g1, g2, g3 = _type2_scalars(
        v, delta, t, mp[1], mp[2], mp[3], mp[4]
    )
    if not ok:
        return False, -1, p0, p1
    lam = mp[0]
    lam2 = lam * lam
    cp = kp0 * p0 + kp1 * p1
    cm = km0 * p0 + km1 * p1
    acp = cp.real * cp.real + cp.imag * cp.imag
    acm = cm.real * cm.real + cm.imag * cm.imag
    w1 = lam2 * dt * g1 * a1 * a1 * acp
    w2 = lam2 * dt * g2 * a1 * a1 * acm
    w3 = lam2 * dt * g3 * (a3 * a3 * acm + a3p * a3p * acp)
    total = w1 + w2 + w3
    if not (total > 0.0):
        return False, -1, p0, p1
    target = u2 * total
    if target < w1:
        scale = lam * math.sqrt(dt / (dp * (w1 / dp)))
        f = math.sqrt(g1) * a1 * scale
        return True, 0, f * cp * km0, f * cp * km1
    if target < w1 + w2:
        scale = lam * math.sqrt(dt / (dp * (w2 / dp)))
        f = math.sqrt(g2) * a1 * scale
        return True, 1, f * cm * kp0, f * cm * kp1
    scale = lam * math.sqrt(dt / (dp * (w3 / dp)))
    f = math.sqrt(g3) * scale
    q0 = f * (a3 * cm * km0 + a3p * cp * kp0)
    q1 = f * (a3 * cm * km1 + a3p * cp * kp1)
    return True, 2, q0, q1


@njit(cache=True, parallel=True)
def run_chunk(
    model_code,
    mp,
    v,
    delta,
    t_start,
    t_end,
    adaptive,
    eta,
    dt_max,
    snap_times,
    phi0,
    seeds,
    ev_cap,
):
    """Propagate a chunk of lanes over the full window.

    snap_times are the interior snapshot times (excluding t_start); the
    caller records the initial state itself.  Returns final states, event
    buffers, snapshots, per-lane error data, a run-level error code and
    grid statistics (n_steps, dt_min, dt_sum).
    """
    n = seeds.shape[0]
    n_snap = snap_times.shape[0]
    p = np.empty((n, 2), np.complex128)
    for i in range(n):
        p[i, 0] = phi0[0]
        p[i, 1] = phi0[1]
    ev_t = np.zeros((n, ev_cap), np.float64)
    ev_c = np.zeros((n, ev_cap), np.int8)
    ev_n = np.zeros(n, np.int64)
    snaps = np.zeros((n, n_snap, 2), np.complex128)
    err = np.zeros(n, np.int64)
    err_info = np.zeros((n, 2), np.float64)

    tab = np.empty((BLOCK, _NCOL), np.float64)
    snap_row = np.empty(BLOCK, np.int64)

    t = t_start
    s_idx = 0
    k0 = 0
    run_err = 0
    n_steps = 0
    dt_min = np.inf
    dt_sum = 0.0

    while t < t_end and run_err == 0:
        nrows = 0
        while nrows < BLOCK and t < t_end:
            ok, eps, g00, g01, g11, rsum = _grid_entries(model_code, mp, v, delta, t)
            if not ok:
                run_err = 5
                break
            if adaptive:
                dt = eta / (eps + rsum)
                if dt > dt_max:
                    dt = dt_max
            else:
                dt = dt_max
            if s_idx < n_snap:
                tb = snap_times[s_idx]
                is_snap = True
            else:
                tb = t_end
                is_snap = False
            if t + dt >= tb:
                dt = tb - t
                if is_snap:
                    snap_row[nrows] = s_idx
                    s_idx += 1
                else:
                    snap_row[nrows] = -1
                t_next = tb
            else:
                snap_row[nrows] = -1
                t_next = t + dt
            w = v * t
            tab[nrows, 0] = t
            tab[nrows, 1] = dt
            tab[nrows, 2] = 1.0 - 0.5 * g00 * dt  # m00r
            tab[nrows, 3] = -w * dt  # m00i
            tab[nrows, 4] = -0.5 * g01 * dt  # m01r
            tab[nrows, 5] = -delta * dt  # m01i
            tab[nrows, 6] = 1.0 - 0.5 * g11 * dt  # m11r
            tab[nrows, 7] = w * dt  # m11i
            tab[nrows, 8] = g00 * dt  # a00
            tab[nrows, 9] = g01 * dt  # a01
            tab[nrows, 10] = g11 * dt  # a11
            n_steps += 1
            dt_sum += dt
            if dt < dt_min:
                dt_min = dt
            t = t_next
            nrows += 1

        for i in prange(n):
            if err[i] != 0:
                continue
            pp0 = p[i, 0]
            pp1 = p[i, 1]
            sd = seeds[i]
            ne = ev_n[i]
            e = 0
            for r in range(nrows):
                dt_r = tab[r, 1]
                a00 = tab[r, 8]
                a01 = tab[r, 9]
                a11 = tab[r, 10]
                n0 = pp0.real * pp0.real + pp0.imag * pp0.imag
                n1 = pp1.real * pp1.real + pp1.imag * pp1.imag
                xr = pp0.real * pp1.real + pp0.imag * pp1.imag
                dp = a00 * n0 + a11 * n1 + 2.0 * a01 * xr
                if dp >= 0.1:
                    e = 1
                    err_info[i, 0] = tab[r, 0]
                    err_info[i, 1] = dp
                    break
                c1 = U64(2 * (k0 + r))
                u1 = _draw(sd, c1)
                if dp < u1 or dp <= 0.0:
                    m00 = complex(tab[r, 2], tab[r, 3])
                    m01 = complex(tab[r, 4], tab[r, 5])
                    m11 = complex(tab[r, 6], tab[r, 7])
                    q0 = m00 * pp0 + m01 * pp1
                    q1 = m01 * pp0 + m11 * pp1
                    inv = 1.0 / math.sqrt(1.0 - dp)
                    q0 = q0 * inv
                    q1 = q1 * inv
                    nn = math.sqrt(
                        q0.real * q0.real + q0.imag * q0.imag + q1.real * q1.real + q1.imag * q1.imag
                    )
                    if not (nn > 0.0 and math.isfinite(nn)):
                        e = 4
                        err_info[i, 0] = tab[r, 0]
                        err_info[i, 1] = nn
                        break
                    pp0 = q0 / nn
                    pp1 = q1 / nn
                else:
                    if ne >= ev_cap:
                        e = 3
                        err_info[i, 0] = tab[r, 0]
                        err_info[i, 1] = np.float64(ne)
                        break
                    u2 = _draw(sd, c1 + ONE)
                    ok_j, ch, pp0, pp1 = _apply_jump(
                        model_code, mp, v, delta, tab[r, 0], dt_r, dp, u2, pp0, pp1
                    )
                    if not ok_j:
                        e = 2
                        err_info[i, 0] = tab[r, 0]
                        err_info[i, 1] = dp
                        break
                    ev_t[i, ne] = tab[r, 0]
                    ev_c[i, ne] = ch
                    ne += 1
                si = snap_row[r]
                if si >= 0:
                    snaps[i, si, 0] = pp0
                    snaps[i, si, 1] = pp1
            p[i, 0] = pp0
            p[i, 1] = pp1
            ev_n[i] = ne
            if e != 0:
                err[i] = e
        k0 += nrows

    return p, ev_t, ev_c, ev_n, snaps, err, err_info, run_err, n_steps, dt_min, dt_sum


@njit(cache=True)
def grid_stats(model_code, mp, v, delta, t_start, t_end, adaptive, eta, dt_max, snap_times):
    """(run_err, n_steps, dt_min, dt_sum) of the shared time grid."""
    t = t_start
    s_idx = 0
    n_snap = snap_times.shape[0]
    n_steps = 0
    dt_min = np.inf
    dt_sum = 0.0
    while t < t_end:
        ok, eps, g00, g01, g11, rsum = _grid_entries(model_code, mp, v, delta, t)
        if not ok:
            return 5, n_steps, dt_min, dt_sum
        if adaptive:
            dt = eta / (eps + rsum)
            if dt > dt_max:
                dt = dt_max
        else:
            dt = dt_max
        if s_idx < n_snap:
            tb = snap_times[s_idx]
            is_snap = True
        else:
            tb = t_end
            is_snap = False
        if t + dt >= tb:
            dt = tb - t
            if is_snap:
                s_idx += 1
            t = tb
        else:
            t = t + dt
        n_steps += 1
        dt_sum += dt
        if dt < dt_min:
            dt_min = dt
    return 0, n_steps, dt_min, dt_sum
