"""Counter-based uniform random numbers with per-trajectory streams.

Layout: every trajectory owns a 64-bit stream seed derived from
(master_seed, trajectory_id).  Draw j of a stream is a pure function

    draw(stream, j) = finalize(stream + (j + 1) * GOLDEN)

where finalize is the splitmix64 output permutation.  Random access by
counter is what makes ensembles reproducible independent of execution
order, chunking, or worker count: no generator state is ever shared.

Inside a trajectory the counter is tied to the step index k: the
jump/no-jump decision at step k consumes counter 2k and channel selection
(only evaluated when a jump fires) consumes counter 2k+1.
"""

from __future__ import annotations

import numpy as np

_MASK = (1 << 64) - 1
GOLDEN = 0x9E3779B97F4A7C15
_MIX_1 = 0xBF58476D1CE4E5B9
_MIX_2 = 0x94D049BB133111EB
# 2^-53: maps the top 53 bits of a 64-bit hash to [0, 1).
_INV53 = 1.0 / 9007199254740992.0


def mix64(z: int) -> int:
    """splitmix64 finalizer on a 64-bit integer (pure Python reference)."""
    z &= _MASK
    z = ((z ^ (z >> 30)) * _MIX_1) & _MASK
    z = ((z ^ (z >> 27)) * _MIX_2) & _MASK
    return (z ^ (z >> 31)) & _MASK


def stream_seed(master_seed: int, trajectory_id: int) -> int:
    """64-bit stream seed for one trajectory."""
    base = mix64((master_seed + GOLDEN) & _MASK)
    return mix64((base + ((trajectory_id + 1) * GOLDEN)) & _MASK)


def unit_draw(stream: int, counter: int) -> float:
    """Draw `counter` of a stream as a float in [0, 1)."""
    h = mix64((stream + ((counter + 1) * GOLDEN)) & _MASK)
    return (h >> 11) * _INV53


def stream_seeds(master_seed: int, trajectory_ids: np.ndarray) -> np.ndarray:
    """Vectorized stream_seed over an array of trajectory ids."""
    golden = np.uint64(GOLDEN)
    base = np.uint64(mix64((master_seed + GOLDEN) & _MASK))
    tid = trajectory_ids.astype(np.uint64)
    return _mix64_np(base + (tid + np.uint64(1)) * golden)


def unit_draws(stream: np.ndarray, counter: np.ndarray) -> np.ndarray:
    """Vectorized unit_draw; stream and counter broadcast together."""
    golden = np.uint64(GOLDEN)
    h = _mix64_np(stream + (counter.astype(np.uint64) + np.uint64(1)) * golden)
    return (h >> np.uint64(11)).astype(np.float64) * _INV53


def _mix64_np(z: np.ndarray) -> np.ndarray:
    z = np.asarray(z, dtype=np.uint64)
    z = (z ^ (z >> np.uint64(30))) * np.uint64(_MIX_1)
    z = (z ^ (z >> np.uint64(27))) * np.uint64(_MIX_2)
    return z ^ (z >> np.uint64(31))


class StreamDraw:
    """Sequential view of one stream: each call consumes the next counter.

    Convenience wrapper for code that wants a plain `draw()` callable, e.g.
    the reference stepper.  The counter can also be bumped manually to stay
    aligned with the per-step layout described in the module docstring.
    """

    def __init__(self, stream: int, counter: int = 0):
        self.stream = stream
        self.counter = counter

    def __call__(self) -> float:
        value = unit_draw(self.stream, self.counter)
        self.counter += 1
        return value

    def skip(self, n: int = 1) -> None:
        self.counter += n
