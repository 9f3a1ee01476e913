"""Common model machinery: seed derivation and the sampling interface.

Every model maps (seed, horizon) deterministically to a Trace; randomness
enters only through the seed. Child seeds for independent paths are derived
from a master seed by counter-based splitting, so any path of any batch can
be regenerated in isolation.
"""

import math

import numpy as np

from ..semantics.trace import Trace


class ConfigError(ValueError):
    pass


def child_seed(master: int, *counters) -> np.random.SeedSequence:
    """Deterministic child seed for (master, counter...)."""
    return np.random.SeedSequence(entropy=int(master), spawn_key=tuple(int(c) for c in counters))


def as_seed_sequence(seed) -> np.random.SeedSequence:
    if isinstance(seed, np.random.SeedSequence):
        return seed
    return np.random.SeedSequence(int(seed))


class UniformBlocks:
    """Sequential uniforms drawn in chunks from one generator.

    Chunked draws concatenate to the same stream as a single large draw, so
    consumers may read any prefix without affecting determinism.
    """

    def __init__(self, rng: np.random.Generator, chunk: int = 256):
        self._rng = rng
        self._chunk = chunk
        self._buf = rng.random(chunk)
        self._pos = 0

    def next(self) -> float:
        if self._pos == len(self._buf):
            self._buf = self._rng.random(self._chunk)
            self._pos = 0
        v = self._buf[self._pos]
        self._pos += 1
        return v

    def exponential(self, rate: float) -> float:
        # inverse CDF of Exp(rate) applied to a uniform draw
        if self._pos == len(self._buf):
            self._buf = self._rng.random(self._chunk)
            self._pos = 0
        v = self._buf[self._pos]
        self._pos += 1
        return -math.log1p(-v) / rate


class PusModel:
    """Sampleable system interface.

    Subclasses provide ``sample``; ``sample_batch`` has a generic fallback.
    ``state_count`` is an int for finitely enumerable state spaces and None
    otherwise; ``initial_states`` and ``labels`` describe the configuration.
    """

    state_count = None

    @property
    def initial_states(self):
        raise NotImplementedError

    @property
    def labels(self):
        raise NotImplementedError

    def sample(self, seed, horizon: float) -> Trace:
        raise NotImplementedError

    def sample_batch(self, seeds, horizon: float):
        return [self.sample(s, horizon) for s in seeds]


def sample_tuple(model: PusModel, k: int, seed, horizon: float):
    """k independent traces from one master seed via counter-based children."""
    root = as_seed_sequence(seed)
    seeds = [np.random.SeedSequence(entropy=root.entropy, spawn_key=root.spawn_key + (i,))
             for i in range(k)]
    return tuple(model.sample_batch(seeds, horizon))
