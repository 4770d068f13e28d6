"""Where in the sweep do jump events happen?

Slow sweep: the decay channel only has weight where the evolving state
overlaps the upper fixed-basis level, which peaks at the crossing, so the
event-time histogram is peaked and roughly symmetric around t = 0.  Fast
sweep: the state rides through the crossing unchanged and only afterwards
does the populated level become the decaying one, so essentially all events
land at t > 0.
"""
import numpy as np

from lztraj import SimConfig, StepControl, TypeIParams, run_ensemble
from lztraj.lzmodel import LzParams
from lztraj.stats import interval_histogram

CASES = [
    # (v, gamma, n_traj)
    (0.1, 0.2, 2000),
    (10.0, 0.8, 100),
]
DT_BIN = 20.0

for v, gamma, n_traj in CASES:
    cfg = SimConfig(
        model=TypeIParams(gamma=gamma, tau=0.0),
        lz=LzParams(v=v),
        initial_state="g",
        n_traj=n_traj,
        master_seed=0,
        step=StepControl(eta=0.01),
    )
    records = run_ensemble(cfg)
    hist = interval_histogram(records, cfg.window, DT_BIN)
    total = int(hist.event_counts.sum())
    print(f"v={v}, gamma={gamma}, {n_traj} trajectories, {total} events")
    print(f"{'interval':>16} {'event fraction':>15}")
    for k in range(hist.event_counts.size):
        lo, hi = hist.edges[k], hist.edges[k + 1]
        frac = hist.event_fraction[k]
        bar = "#" * int(round(50 * frac))
        print(f"[{lo:>6.0f},{hi:>6.0f}] {frac:>15.4f} {bar}")
    times = np.array([e.time for r in records for e in r.events])
    print(f"fraction of events at t > 0: {(times > 0.0).mean():.3f}\n")
