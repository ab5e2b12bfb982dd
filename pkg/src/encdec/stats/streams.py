"""Seed streams

Every random draw in encdec comes from a counter-based Philox generator keyed
by ``(base_seed, tag, *indices)``. The same key always yields the same
stream, so results do not depend on evaluation order or worker count.
"""

import hashlib

import numpy as np

from ..exceptions import ArgumentError

# stream tags, one per consumer
SUBJECT = 1
NODE = 2
WEIGHTS = 3
HSIC = 10
KS = 11
FOLD = 20
TREE = 21
IMPORTANCE = 22
ENCODING = 30
DECODING = 31
AGGREGATE = 32


def _sequence(seed: int, keys: tuple) -> np.random.SeedSequence:
    if seed < 0 or any(k < 0 for k in keys):
        raise ArgumentError(f'Seeds and stream keys must be non-negative: {seed}, {keys}')
    return np.random.SeedSequence(seed, spawn_key=tuple(int(k) for k in keys))


def stream(seed: int, *keys: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(_sequence(seed, keys)))


def derive_seed(seed: int, *keys: int) -> int:
    """Integer seed for a sub-computation that takes its own base seed"""
    return int(_sequence(seed, keys).generate_state(1, dtype=np.uint32)[0])


def name_key(name: str) -> int:
    """Stable stream key for a node name"""
    return int.from_bytes(hashlib.sha256(name.encode('utf-8')).digest()[:4], 'big')
