"""Trajectory average vs direct master-equation integration.

Averaging the pure-state snapshots over the ensemble reconstructs the
density matrix; the trace distance to the RK4 master-equation solution
should fluctuate at the Monte Carlo scale ~ 1/sqrt(n_traj) and stay well
inside the 3/sqrt(n_traj) envelope the `validate` subcommand enforces.
"""
import math

import numpy as np

from lztraj import SimConfig, StepControl, TypeIParams, run_ensemble
from lztraj.lzmodel import LzParams
from lztraj.numerics import trace_distance
from lztraj.oracle import ensemble_density, integrate_master

N_TRAJ = 1000

cfg = SimConfig(
    model=TypeIParams(gamma=0.2, tau=0.3),
    lz=LzParams(v=0.1),
    initial_state="g",
    n_traj=N_TRAJ,
    master_seed=1,
    step=StepControl(eta=0.01),
    snapshots_enabled=True,
    snapshot_spacing=10.0,
)

records = run_ensemble(cfg)
times, rho_hat = ensemble_density(records)

phi0 = records[0].snapshot_states[0]
rho0 = np.outer(phi0, phi0.conj())
dm = integrate_master(cfg.model, cfg.lz, rho0, cfg.t_start, cfg.t_end, times)

bound = 3.0 / math.sqrt(N_TRAJ)
print(f"{N_TRAJ} trajectories, envelope 3/sqrt(n) = {bound:.4f}")
print(f"{'t':>8} {'pop_e (traj)':>13} {'pop_e (master)':>15} {'trace dist':>11}")
worst = 0.0
for k in range(times.size):
    td = trace_distance(rho_hat[k], dm.rhos[k])
    worst = max(worst, td)
    print(f"{times[k]:>8.1f} {rho_hat[k][0, 0].real:>13.5f} "
          f"{dm.rhos[k][0, 0].real:>15.5f} {td:>11.5f}")
print(f"max trace distance: {worst:.5f} ({'inside' if worst <= bound else 'OUTSIDE'} envelope)")
