"""Closed-system avoided-crossing scan.

With dissipation off the solver reduces to pure Schrodinger evolution, and
the final ground-state population interpolates between adiabatic following
(slow sweep, P -> 1) and diabatic passage (fast sweep, P -> 1 - exp(-pi
delta^2 / v)).  The asymptotic formula assumes an infinite sweep window, so
the finite-window numbers sit close to, not on, the formula.

Runs in a few seconds.
"""
import math

import numpy as np

from lztraj import SimConfig, StepControl, TypeIParams, run_trajectory
from lztraj.lzmodel import LzParams
from lztraj.oracle import integrate_master

RHO_E = np.array([[1.0, 0.0], [0.0, 0.0]], dtype=np.complex128)

SWEEP_RATES = [0.1, 0.5, 1.0, 2.0, 5.0, 10.0]

print(f"{'v':>6} {'P_ground (trajectory)':>22} {'P_ground (master)':>18} "
      f"{'1 - exp(-pi/v)':>15}")
for v in SWEEP_RATES:
    cfg = SimConfig(
        model=TypeIParams(gamma=0.0),
        lz=LzParams(v=v),
        t_start=-100.0,
        t_end=100.0,
        initial_state="e",
        n_traj=1,
        step=StepControl(eta=0.01),
    )
    # gamma = 0: every trajectory is identical, one is enough
    phi = run_trajectory(cfg, 0).final_state
    p_traj = abs(phi[1]) ** 2

    dm = integrate_master(cfg.model, cfg.lz, RHO_E, cfg.t_start, cfg.t_end,
                          np.array([cfg.t_end]))
    p_master = dm.rhos[-1][1, 1].real

    p_formula = 1.0 - math.exp(-math.pi * cfg.lz.delta**2 / v)
    print(f"{v:>6.2f} {p_traj:>22.6f} {p_master:>18.6f} {p_formula:>15.6f}")
