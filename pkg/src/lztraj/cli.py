"""Command line interface.

Subcommands:
  run       propagate an ensemble, write counts/intervals/events/summary
  validate  compare the ensemble-averaged density matrix to a direct
            master-equation integration
  sweep     repeat `run` over a list of values for one config entry
  stats     re-aggregate statistics from a previous run's events.csv

Exit codes: 0 success, 2 bad config or arguments, 3 runtime failure,
4 validation failure.
"""

from __future__ import annotations

import argparse
import csv
import dataclasses
import json
import sys
import time
from pathlib import Path

import numpy as np

from . import config as cfgmod
from . import engine, oracle, stats
from .errors import ConfigError, LztrajError, ValidationError
from .numerics import trace_distance

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_RUNTIME = 3
EXIT_VALIDATION = 4


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


def _write_csv(path: Path, header: list[str], rows) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        writer.writerows(rows)


def _write_json(path: Path, payload: dict) -> None:
    path.write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n", encoding="utf-8")


def _counts_rows(hist: stats.CountHistogram):
    header = ["N", "count", "probability"]
    for m in range(hist.n_channels):
        header += [f"channel{m}_count", f"channel{m}_probability"]
    all_n = set(hist.counts)
    for m in range(hist.n_channels):
        all_n.update(hist.per_channel[m])
    rows = []
    for n in sorted(all_n):
        row = [n, hist.counts.get(n, 0), _fmt(hist.counts.get(n, 0) / hist.n_traj)]
        for m in range(hist.n_channels):
            c = hist.per_channel[m].get(n, 0)
            row += [c, _fmt(c / hist.n_traj)]
        rows.append(row)
    return header, rows


def _intervals_rows(hist: stats.IntervalHistogram):
    header = ["t_lo", "t_hi", "event_count", "mean_jumps", "event_fraction", "traj_fraction"]
    mean = hist.mean_jumps
    efrac = hist.event_fraction
    tfrac = hist.traj_fraction
    rows = []
    for k in range(len(hist.event_counts)):
        rows.append(
            [
                _fmt(hist.edges[k]),
                _fmt(hist.edges[k + 1]),
                int(hist.event_counts[k]),
                _fmt(mean[k]),
                _fmt(efrac[k]),
                _fmt(tfrac[k]),
            ]
        )
    return header, rows


def _events_rows(records):
    rows = []
    for r in records:
        for e in r.events:
            rows.append([r.trajectory_id, _fmt(e.time), e.channel])
    return ["trajectory_id", "time", "channel"], rows


def _aggregate_and_write(out: Path, cfg, records, runtime: float | None) -> dict:
    chist = stats.count_histogram(records, cfg.n_channels)
    ihist = stats.interval_histogram(records, cfg.window, cfg.dt_bin)
    summary = stats.summarize(chist)

    header, rows = _counts_rows(chist)
    _write_csv(out / "counts.csv", header, rows)
    header, rows = _intervals_rows(ihist)
    _write_csv(out / "intervals.csv", header, rows)
    header, rows = _events_rows(records)
    _write_csv(out / "events.csv", header, rows)

    if cfg.snapshots_enabled and records[0].snapshot_times is not None:
        times, rho = oracle.ensemble_density(records)
        occ_rows = [
            [_fmt(t), _fmt(rho[i, 0, 0].real), _fmt(rho[i, 1, 1].real),
             _fmt(rho[i, 0, 1].real), _fmt(rho[i, 0, 1].imag)]
            for i, t in enumerate(times)
        ]
        _write_csv(out / "occupations.csv", ["t", "pop_e", "pop_g", "coh_re", "coh_im"], occ_rows)

    payload = {
        "config": cfgmod.serialize(cfg),
        "n_traj": cfg.n_traj,
        "n_channels": cfg.n_channels,
        "total_events": chist.total_events,
        "summary": dataclasses.asdict(summary),
        "step_stats": engine.step_stats(cfg),
    }
    if runtime is not None:
        payload["runtime_seconds"] = runtime
    _write_json(out / "summary.json", payload)
    return payload


def _load_config(args) -> cfgmod.SimConfig:
    cfg = cfgmod.load(args.config)
    if getattr(args, "seed", None) is not None:
        cfg = dataclasses.replace(cfg, master_seed=args.seed)
    return cfg


def cmd_run(args) -> int:
    cfg = _load_config(args)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    t0 = time.perf_counter()
    records = engine.run_ensemble(cfg, workers=args.workers)
    runtime = time.perf_counter() - t0
    payload = _aggregate_and_write(out, cfg, records, runtime)
    s = payload["summary"]
    print(
        f"{cfg.n_traj} trajectories, {payload['total_events']} events; "
        f"mean {s['mean']:.6g}, median {s['median']}, mode {s['mode']}, "
        f"variance {s['variance']:.6g}"
    )
    print(f"wrote counts.csv intervals.csv events.csv summary.json to {out}")
    return EXIT_OK


def cmd_validate(args) -> int:
    cfg = _load_config(args)
    if not cfg.snapshots_enabled:
        cfg = dataclasses.replace(cfg, snapshots_enabled=True)
    ref_cfg = cfg
    if args.oracle_config is not None:
        # compare against the master equation of a different config; used to
        # check that the comparison actually has teeth
        ref_cfg = cfgmod.load(args.oracle_config)
    records = engine.run_ensemble(cfg, workers=args.workers)
    times, rho_hat = oracle.ensemble_density(records)
    phi0 = engine.initial_state_vector(cfg.initial_state, cfg.lz, cfg.t_start)
    rho0 = np.outer(phi0, phi0.conj())
    ref = oracle.integrate_master(
        ref_cfg.model, ref_cfg.lz, rho0, cfg.t_start, cfg.t_end, times,
        step_scale=args.step_scale,
    )
    dists = np.array(
        [trace_distance(rho_hat[i], ref.rhos[i]) for i in range(len(times))]
    )
    bound = 3.0 / np.sqrt(cfg.n_traj)
    passed = bool(dists.max() <= bound)
    payload = {
        "config": cfgmod.serialize(cfg),
        "n_traj": cfg.n_traj,
        "bound": bound,
        "max_trace_distance": float(dists.max()),
        "mean_trace_distance": float(dists.mean()),
        "pass": passed,
        "times": [float(t) for t in times],
        "trace_distance": [float(d) for d in dists],
    }
    out = Path(args.out)
    out.parent.mkdir(parents=True, exist_ok=True)
    _write_json(out, payload)
    status = "PASS" if passed else "FAIL"
    print(
        f"{status}: max trace distance {dists.max():.3e} "
        f"(mean {dists.mean():.3e}) vs bound {bound:.3e} at n_traj={cfg.n_traj}"
    )
    if not passed:
        raise ValidationError(
            f"ensemble average disagrees with the master equation: "
            f"{dists.max():.3e} > {bound:.3e}"
        )
    return EXIT_OK


# bare axis names accepted by `sweep --param`; dotted block.key also works
_AXES = {
    "v": "lz.v",
    "delta": "lz.delta",
    "gamma": "type1.gamma",
    "tau": "type1.tau",
    "lambda": "type2.lambda",
    "theta": "type2.theta",
    "temperature": "type2.temperature",
    "omega_c": "type2.omega_c",
    "spectral_sign": "type2.spectral_sign",
    "t_start": "window.t_start",
    "t_end": "window.t_end",
    "n_traj": "ensemble.n_traj",
    "eta": "step.eta",
    "dt_max": "step.dt_max",
    "dt_bin": "intervals.dt_bin",
    "grid_spacing": "snapshots.grid_spacing",
}

_INT_AXES = ("spectral_sign", "n_traj")


def _resolve_axis(param: str) -> str:
    if param in _AXES:
        return _AXES[param]
    if "." in param and param in _AXES.values():
        return param
    known = ", ".join(sorted(_AXES))
    raise ConfigError(f"unknown sweep axis {param!r}; known axes: {known}")


def _set_by_path(data: dict, path: str, value):
    keys = path.split(".")
    node = data
    for k in keys[:-1]:
        if not isinstance(node.get(k), dict):
            node[k] = {}
        node = node[k]
    node[keys[-1]] = value


def cmd_sweep(args) -> int:
    base = cfgmod.load(args.config)
    path = _resolve_axis(args.param)
    try:
        values = [float(v) for v in args.values.split(",") if v.strip() != ""]
    except ValueError as exc:
        raise ConfigError(f"bad sweep values {args.values!r}: {exc}") from exc
    if not values:
        raise ConfigError("sweep needs at least one value")
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    manifest = {"param": args.param, "points": []}
    for i, value in enumerate(values):
        data = cfgmod.serialize(base)
        if path.split(".")[-1] in _INT_AXES:
            _set_by_path(data, path, int(value))
        else:
            _set_by_path(data, path, value)
        cfg = cfgmod.parse(data)
        if getattr(args, "seed", None) is not None:
            cfg = dataclasses.replace(cfg, master_seed=args.seed)
        point_dir = out / f"point_{i:03d}"
        point_dir.mkdir(parents=True, exist_ok=True)
        t0 = time.perf_counter()
        records = engine.run_ensemble(cfg, workers=args.workers)
        runtime = time.perf_counter() - t0
        payload = _aggregate_and_write(point_dir, cfg, records, runtime)
        manifest["points"].append(
            {
                "index": i,
                "value": value,
                "dir": point_dir.name,
                "total_events": payload["total_events"],
                "summary": payload["summary"],
            }
        )
        print(f"point {i}: {args.param}={value:g} mean {payload['summary']['mean']:.6g}")
    _write_json(out / "manifest.json", manifest)
    print(f"wrote {len(values)} points and manifest.json to {out}")
    return EXIT_OK


def cmd_stats(args) -> int:
    run_dir = Path(args.run_dir)
    summary_path = run_dir / "summary.json"
    events_path = run_dir / "events.csv"
    if not summary_path.is_file() or not events_path.is_file():
        raise ConfigError(f"{run_dir} does not look like a run directory")
    meta = json.loads(summary_path.read_text(encoding="utf-8"))
    cfg = cfgmod.parse(meta["config"])
    if args.dt_bin is not None:
        data = cfgmod.serialize(cfg)
        data["intervals"]["dt_bin"] = args.dt_bin
        cfg = cfgmod.parse(data)

    # rebuild minimal per-trajectory event lists; zero-event trajectories do
    # not appear in events.csv, so n_traj comes from the stored config
    events_by_traj: dict[int, list] = {}
    with open(events_path, encoding="utf-8", newline="") as fh:
        reader = csv.DictReader(fh)
        for row in reader:
            tid = int(row["trajectory_id"])
            events_by_traj.setdefault(tid, []).append(
                engine.JumpEvent(
                    time=float(row["time"]), channel=int(row["channel"]), trajectory_id=tid
                )
            )
    records = [
        engine.TrajectoryRecord(
            trajectory_id=tid,
            seed_stream=0,
            events=tuple(events_by_traj.get(tid, ())),
            final_state=np.zeros(2, dtype=np.complex128),
        )
        for tid in range(cfg.n_traj)
    ]
    out = Path(args.out) if args.out else run_dir
    out.mkdir(parents=True, exist_ok=True)

    chist = stats.count_histogram(records, cfg.n_channels)
    ihist = stats.interval_histogram(records, cfg.window, cfg.dt_bin)
    summary = stats.summarize(chist)
    header, rows = _counts_rows(chist)
    _write_csv(out / "counts.csv", header, rows)
    header, rows = _intervals_rows(ihist)
    _write_csv(out / "intervals.csv", header, rows)
    print(
        f"re-aggregated {chist.total_events} events from {cfg.n_traj} trajectories; "
        f"mean {summary.mean:.6g}, dt_bin {cfg.dt_bin:g}"
    )
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="lztraj",
        description="stochastic quantum-jump trajectories for the dissipative "
        "Landau-Zener two-level system",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p, seed=True):
        p.add_argument("--config", required=True, help="JSON config file")
        p.add_argument("--workers", type=int, default=None, help="compute threads")
        if seed:
            p.add_argument("--seed", type=int, default=None, help="override master_seed")

    p_run = sub.add_parser("run", help="run an ensemble and write statistics")
    add_common(p_run)
    p_run.add_argument("--out", default="lztraj_out", help="output directory")
    p_run.set_defaults(func=cmd_run)

    p_val = sub.add_parser("validate", help="check the ensemble against the master equation")
    add_common(p_val)
    p_val.add_argument("--out", default="validate.json", help="report file")
    p_val.add_argument(
        "--step-scale",
        type=float,
        default=1.0,
        help="scale factor on the reference integrator step",
    )
    p_val.add_argument("--oracle-config", default=None, help=argparse.SUPPRESS)
    p_val.set_defaults(func=cmd_validate)

    p_sweep = sub.add_parser("sweep", help="run over a list of values for one config entry")
    add_common(p_sweep)
    p_sweep.add_argument("--param", required=True, help="config entry, e.g. v or type1.gamma")
    p_sweep.add_argument("--values", required=True, help="comma-separated values")
    p_sweep.add_argument("--out", default="lztraj_sweep", help="output directory")
    p_sweep.set_defaults(func=cmd_sweep)

    p_stats = sub.add_parser("stats", help="re-aggregate statistics from a previous run")
    p_stats.add_argument("--run-dir", required=True, help="directory written by `lztraj run`")
    p_stats.add_argument("--dt-bin", type=float, default=None, help="new interval width")
    p_stats.add_argument("--out", default=None, help="output directory (default: run dir)")
    p_stats.set_defaults(func=cmd_stats)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except ValidationError as exc:
        print(f"validation failed: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except LztrajError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
