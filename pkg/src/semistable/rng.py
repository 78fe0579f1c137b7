"""Splittable counter-based random streams.

A stream is identified by (seed, stream_id).  Draw number i of a stream
gets its own 64-bit subkey; uniforms consumed inside that draw are indexed
j = 0, 1, ... under the subkey.  Every value is a pure function of
(seed, stream_id, i, j) through the SplitMix64 finalizer, so sequences are
reproducible regardless of thread scheduling or backend, and a draw's
internal consumption can vary without disturbing its neighbours.

Streams are single-owner: split children for parallel work, never share.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

MASK64 = (1 << 64) - 1
GAMMA_DRAW = 0x9E3779B97F4A7C15  # subkey stepping (golden gamma)
GAMMA_SUB = 0xC2B2AE3D27D4EB4F  # uniform stepping inside a draw
SEED_SALT = 0xD6E8FEB86659FD93
STREAM_SALT = 0xA0761D6478BD642F
_INV53 = 1.0 / 9007199254740992.0  # 2^-53


def mix64(x: int) -> int:
    """SplitMix64 finalizer on python ints (reference implementation)."""
    x &= MASK64
    x ^= x >> 30
    x = (x * 0xBF58476D1CE4E5B9) & MASK64
    x ^= x >> 27
    x = (x * 0x94D049BB133111EB) & MASK64
    x ^= x >> 31
    return x


def mix64_vec(x: np.ndarray) -> np.ndarray:
    x = x.astype(np.uint64, copy=True)
    x ^= x >> np.uint64(30)
    x *= np.uint64(0xBF58476D1CE4E5B9)
    x ^= x >> np.uint64(27)
    x *= np.uint64(0x94D049BB133111EB)
    x ^= x >> np.uint64(31)
    return x


def stream_key(seed: int, stream_id: int) -> int:
    return mix64(mix64(seed + SEED_SALT) ^ mix64(stream_id + STREAM_SALT))


def child_stream_id(stream_id: int, tag: int) -> int:
    # affine in tag under an odd multiplier: distinct tags never collide
    # within one parent
    return mix64(mix64(stream_id + SEED_SALT) + tag * GAMMA_DRAW)


def draw_key(key: int, i: int) -> int:
    return mix64(key + i * GAMMA_DRAW)


def uniform_at(key: int, j: int) -> float:
    """Uniform j of the draw keyed by key, in [0, 1)."""
    return (mix64(key + j * GAMMA_SUB) >> 11) * _INV53


@dataclass
class RngStream:
    """Stateful cursor over the draws of one (seed, stream_id) stream."""

    seed: int
    stream_id: int = 0
    _counter: int = field(default=0, repr=False)

    def __post_init__(self):
        self.seed = int(self.seed) & MASK64
        self.stream_id = int(self.stream_id) & MASK64
        self._key = stream_key(self.seed, self.stream_id)

    def split(self, tag: int) -> "RngStream":
        """Independent child stream; deterministic in (stream_id, tag)."""
        return RngStream(self.seed, child_stream_id(self.stream_id, tag))

    def take_keys(self, n: int) -> np.ndarray:
        """Subkeys for the next n draws (consumes n draw slots)."""
        base = self._counter
        self._counter += n
        idx = np.arange(base, base + n, dtype=np.uint64)
        return mix64_vec(np.uint64(self._key) + idx * np.uint64(GAMMA_DRAW))

    def next_key(self) -> int:
        key = draw_key(self._key, self._counter)
        self._counter += 1
        return key

    def uniforms(self, n: int) -> np.ndarray:
        """One uniform per draw slot (j = 0), mostly for tests."""
        keys = self.take_keys(n)
        return (mix64_vec(keys) >> np.uint64(11)).astype(np.float64) * _INV53

    def state(self) -> dict:
        """Echo for output-file headers."""
        return {"seed": self.seed, "stream_id": self.stream_id, "counter": self._counter}
