"""Jump-count distributions vs coupling strength.

Fixed-basis (type 1) dissipation during a slow sweep: the histogram of the
number of jumps per trajectory broadens and its median moves to larger N as
gamma grows.  Uses a reduced ensemble so the script stays under a minute;
the CLI `sweep` subcommand produces the same tables at full size.
"""
import numpy as np

from lztraj import SimConfig, StepControl, TypeIParams, run_ensemble
from lztraj.lzmodel import LzParams
from lztraj.stats import count_histogram, summarize

N_TRAJ = 2000
GAMMAS = [0.1, 0.2, 0.4, 0.8]

rows = {}
for gamma in GAMMAS:
    cfg = SimConfig(
        model=TypeIParams(gamma=gamma, tau=0.0),
        lz=LzParams(v=0.1),
        initial_state="g",
        n_traj=N_TRAJ,
        master_seed=0,
        step=StepControl(eta=0.01),
    )
    records = run_ensemble(cfg)
    hist = count_histogram(records, cfg.n_channels)
    rows[gamma] = (hist, summarize(hist))

n_max = max(max(h.counts) for h, _ in rows.values())
header = "     N " + " ".join(f"g={g:<7}" for g in GAMMAS)
print(header)
for n in range(n_max + 1):
    probs = [rows[g][0].probs.get(n, 0.0) for g in GAMMAS]
    print(f"{n:>6} " + " ".join(f"{p:<9.4f}" for p in probs))

print("\n" + f"{'':>6} " + " ".join(f"g={g:<7}" for g in GAMMAS))
print("median " + " ".join(f"{rows[g][1].median:<9d}" for g in GAMMAS))
print("  mean " + " ".join(f"{rows[g][1].mean:<9.3f}" for g in GAMMAS))
