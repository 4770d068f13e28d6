"""Temperature in the two dissipation models.

Fixed-basis (type 1) channels: tau > 0 switches on the upward channel, so
trajectories accumulate more jumps and the median of N climbs with tau.
Instantaneous-eigenbasis (type 2) channels at T = 0: only the downward
channel survives, and a state prepared in the instantaneous ground state is
(almost) dark — the residual events come from the nonadiabatic admixture of
the upper eigenstate that a finite sweep rate creates.
"""
import numpy as np

from lztraj import SimConfig, StepControl, TypeIIParams, TypeIParams, run_ensemble
from lztraj.engine import initial_state_vector
from lztraj.lzmodel import LzParams
from lztraj.stats import count_histogram, summarize

N_TRAJ = 2000

print("type 1, gamma=0.1, v=0.1: jump counts vs tau")
print(f"{'tau':>5} {'median':>7} {'mean':>7}")
for tau in (0.0, 0.5, 1.0):
    cfg = SimConfig(
        model=TypeIParams(gamma=0.1, tau=tau),
        lz=LzParams(v=0.1),
        initial_state="g",
        n_traj=N_TRAJ,
        master_seed=0,
        step=StepControl(eta=0.01),
    )
    records = run_ensemble(cfg)
    s = summarize(count_histogram(records, cfg.n_channels))
    print(f"{tau:>5.1f} {s.median:>7d} {s.mean:>7.3f}")

print("\ntype 2, T=0, lambda=1, v=0.1: near-dark evolution from the "
      "instantaneous ground state")
print(f"{'theta':>7} {'events':>7} {'quiet traj':>10} {'min fidelity':>13}")
for theta in (0.0, np.pi / 2):
    cfg = SimConfig(
        model=TypeIIParams(lam=1.0, theta=theta, temperature=0.0, omega_c=20.0),
        lz=LzParams(v=0.1),
        initial_state="ground",
        n_traj=N_TRAJ,
        master_seed=0,
        step=StepControl(eta=0.01),
    )
    records = run_ensemble(cfg)
    total = sum(len(r.events) for r in records)
    quiet = sum(1 for r in records if not r.events)
    dark = initial_state_vector("ground", cfg.lz, cfg.t_end)
    fid = min(abs(np.vdot(dark, r.final_state)) ** 2 for r in records)
    print(f"{theta:>7.4f} {total:>7d} {quiet:>10d} {fid:>13.6f}")
