"""Jump-count and jump-time statistics over trajectory ensembles.

All aggregation is done on integer event counts; probabilities and
fractions are derived at the end by a single division.  That makes
merging partial aggregates from disjoint trajectory ranges bit-exact:
merge_partials(shards) equals single-pass aggregation over the union.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field

import numpy as np


@dataclass
class CountHistogram:
    """Distribution of jumps per trajectory, total and per channel.

    counts[N] is the number of trajectories with exactly N jumps;
    per_channel[m][N] counts trajectories with N jumps on channel m.
    """

    n_traj: int
    n_channels: int
    counts: dict[int, int] = field(default_factory=dict)
    per_channel: list[dict[int, int]] = field(default_factory=list)

    @property
    def probs(self) -> dict[int, float]:
        return {n: c / self.n_traj for n, c in sorted(self.counts.items())}

    def channel_probs(self, m: int) -> dict[int, float]:
        return {n: c / self.n_traj for n, c in sorted(self.per_channel[m].items())}

    @property
    def total_events(self) -> int:
        return sum(n * c for n, c in self.counts.items())


@dataclass
class IntervalHistogram:
    """Events binned into uniform time intervals over the window.

    Three normalizations are kept: mean jumps per trajectory per
    interval, fraction of all events per interval, and fraction of
    trajectories with at least one event in the interval.
    """

    edges: np.ndarray
    n_traj: int
    event_counts: np.ndarray  # events in each interval
    traj_counts: np.ndarray  # trajectories with >= 1 event in each interval

    @property
    def total_events(self) -> int:
        return int(self.event_counts.sum())

    @property
    def mean_jumps(self) -> np.ndarray:
        return self.event_counts / self.n_traj

    @property
    def event_fraction(self) -> np.ndarray:
        total = self.total_events
        if total == 0:
            return np.zeros_like(self.event_counts, dtype=np.float64)
        return self.event_counts / total

    @property
    def traj_fraction(self) -> np.ndarray:
        return self.traj_counts / self.n_traj


@dataclass(frozen=True)
class SummaryStats:
    mean: float
    median: int
    mode: int
    variance: float


def count_histogram(records, n_channels: int) -> CountHistogram:
    """Histogram of per-trajectory jump counts from trajectory records."""
    counts: Counter = Counter()
    per_channel = [Counter() for _ in range(n_channels)]
    for r in records:
        counts[len(r.events)] += 1
        ch = [0] * n_channels
        for e in r.events:
            ch[e.channel] += 1
        for m in range(n_channels):
            per_channel[m][ch[m]] += 1
    return CountHistogram(
        n_traj=len(records),
        n_channels=n_channels,
        counts=dict(counts),
        per_channel=[dict(c) for c in per_channel],
    )


def interval_histogram(records, window: tuple[float, float], dt_bin: float) -> IntervalHistogram:
    """Bin event times into uniform intervals of width dt_bin.

    dt_bin must divide the window within 1e-9.  An event exactly on an
    interior edge belongs to the interval on its right.
    """
    t0, t1 = window
    span = t1 - t0
    n_bins = int(round(span / dt_bin))
    if n_bins < 1 or abs(n_bins * dt_bin - span) > 1e-9:
        raise ValueError(f"dt_bin={dt_bin!r} does not divide the window ({t0}, {t1})")
    edges = np.linspace(t0, t1, n_bins + 1)
    event_counts = np.zeros(n_bins, dtype=np.int64)
    traj_counts = np.zeros(n_bins, dtype=np.int64)
    for r in records:
        seen = np.zeros(n_bins, dtype=bool)
        for e in r.events:
            k = int((e.time - t0) // dt_bin)
            if k == n_bins and e.time <= t1:  # event exactly at the window end
                k -= 1
            if not 0 <= k < n_bins:
                raise ValueError(f"event time {e.time!r} outside the window ({t0}, {t1})")
            event_counts[k] += 1
            seen[k] = True
        traj_counts[seen] += 1
    return IntervalHistogram(
        edges=edges, n_traj=len(records), event_counts=event_counts, traj_counts=traj_counts
    )


def summarize(hist: CountHistogram) -> SummaryStats:
    """Mean, median, mode and variance of the jump-count distribution.

    The median is the smallest N whose CDF reaches 1/2; ties for the mode
    resolve to the smallest N.
    """
    if hist.n_traj <= 0 or not hist.counts:
        raise ValueError("empty histogram")
    total = hist.n_traj
    items = sorted(hist.counts.items())
    mean = sum(n * c for n, c in items) / total
    second = sum(n * n * c for n, c in items) / total
    variance = second - mean * mean
    cum = 0
    median = items[-1][0]
    for n, c in items:
        cum += c
        if 2 * cum >= total:
            median = n
            break
    best = max(c for _, c in items)
    mode = min(n for n, c in items if c == best)
    return SummaryStats(mean=mean, median=median, mode=mode, variance=variance)


def merge_partials(parts):
    """Merge partial aggregates from disjoint trajectory ranges.

    Accepts a sequence of CountHistogram or of IntervalHistogram built
    with identical configuration (channel count respectively edges);
    mismatched metadata raises ValueError.
    """
    parts = list(parts)
    if not parts:
        raise ValueError("nothing to merge")
    first = parts[0]
    if isinstance(first, CountHistogram):
        if any(not isinstance(p, CountHistogram) for p in parts):
            raise ValueError("cannot mix aggregate types")
        if any(p.n_channels != first.n_channels for p in parts):
            raise ValueError("mismatched channel counts")
        counts: Counter = Counter()
        per_channel = [Counter() for _ in range(first.n_channels)]
        n_traj = 0
        for p in parts:
            n_traj += p.n_traj
            counts.update(p.counts)
            for m in range(first.n_channels):
                per_channel[m].update(p.per_channel[m])
        return CountHistogram(
            n_traj=n_traj,
            n_channels=first.n_channels,
            counts=dict(counts),
            per_channel=[dict(c) for c in per_channel],
        )
    if isinstance(first, IntervalHistogram):
        if any(not isinstance(p, IntervalHistogram) for p in parts):
            raise ValueError("cannot mix aggregate types")
        if any(not np.array_equal(p.edges, first.edges) for p in parts):
            raise ValueError("mismatched interval edges")
        return IntervalHistogram(
            edges=first.edges.copy(),
            n_traj=sum(p.n_traj for p in parts),
            event_counts=np.sum([p.event_counts for p in parts], axis=0),
            traj_counts=np.sum([p.traj_counts for p in parts], axis=0),
        )
    raise ValueError(f"unsupported aggregate type: {type(first).__name__}")
