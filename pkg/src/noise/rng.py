"""
Deterministic random streams: PCG64DXSM seeded by SeedSequence(entropy=seed, spawn_key=key).

A stream is single-owner; never share one between threads.
"""

from __future__ import annotations

from enum import IntEnum
from typing import Optional, Sequence, Tuple, Union

import numpy as np

from ..core.exceptions import InputError

SEED_LIMIT = 2**64

Shape = Union[int, Tuple[int, ...]]


class StreamKey(IntEnum):
    """Child keys of a trial stream, one per draw site"""

    BELL = 0
    XOR = 1
    HADAMARD = 2
    MEASURE = 3
    READOUT = 4
    CHANNEL = 5
    CORRECTION = 6
    INPUT = 7


def _check_seed(seed: int) -> int:
    if isinstance(seed, bool) or not isinstance(seed, (int, np.integer)):
        raise InputError(f"seed must be an integer, got {type(seed).__name__}")
    if not 0 <= int(seed) < SEED_LIMIT:
        raise InputError(f"seed must be in [0, 2^64), got {seed}")
    return int(seed)


class RngStream:
    """Seeded, reproducible random stream with cheap derived children"""

    def __init__(self, seed: int, spawn_key: Sequence[int] = ()):
        self._seed = _check_seed(seed)
        self._spawn_key = tuple(int(k) for k in spawn_key)
        self._generator: Optional[np.random.Generator] = None

    @property
    def seed(self) -> int:
        return self._seed

    @property
    def spawn_key(self) -> Tuple[int, ...]:
        return self._spawn_key

    @property
    def generator(self) -> np.random.Generator:
        # built on first draw; children that never draw stay free
        if self._generator is None:
            sequence = np.random.SeedSequence(entropy=self._seed, spawn_key=self._spawn_key)
            self._generator = np.random.Generator(np.random.PCG64DXSM(sequence))
        return self._generator

    def child(self, key: int) -> RngStream:
        """Independent stream derived from (seed, spawn_key + (key,))"""
        if int(key) < 0:
            raise InputError(f"child key must be non-negative, got {key}")
        return RngStream(self._seed, self._spawn_key + (int(key),))

    def uniform(self) -> float:
        """One draw from [0, 1)"""
        return float(self.generator.random())

    def uniforms(self, size: Shape) -> np.ndarray:
        return self.generator.random(size)

    def standard_normal(self, size: Shape) -> np.ndarray:
        return self.generator.standard_normal(size)

    def complex_normal(self, size: Shape) -> np.ndarray:
        """Standard complex Gaussians: real and imaginary parts each N(0, 1/2)"""
        shape = (size,) if isinstance(size, int) else tuple(size)
        parts = self.generator.standard_normal((2,) + shape)
        return (parts[0] + 1j * parts[1]) * np.sqrt(0.5)

    def __repr__(self) -> str:
        return f"RngStream(seed={self._seed}, spawn_key={self._spawn_key})"


def derive_seed(master_seed: int, index: int) -> int:
    """64-bit seed for sub-experiment `index` (e.g. a sweep point)"""
    if int(index) < 0:
        raise InputError(f"index must be non-negative, got {index}")
    sequence = np.random.SeedSequence(entropy=_check_seed(master_seed), spawn_key=(int(index),))
    return int(sequence.generate_state(1, dtype=np.uint64)[0])
