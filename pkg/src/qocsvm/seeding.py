"""Counter-style child seeds: every task derives its generator from (master seed, task path)."""
from __future__ import annotations

import hashlib

import numpy as np


def task_words(path: str) -> list:
    digest = hashlib.sha256(path.encode("utf-8")).digest()
    return [int.from_bytes(digest[i : i + 4], "little") for i in range(0, 16, 4)]


def child_seed_sequence(master_seed: int, path: str) -> np.random.SeedSequence:
    return np.random.SeedSequence(entropy=[int(master_seed) & (2**64 - 1), *task_words(path)])


def child_rng(master_seed: int, path: str) -> np.random.Generator:
    return np.random.default_rng(child_seed_sequence(master_seed, path))


def child_seed(master_seed: int, path: str) -> int:
    """A 64-bit integer seed for a task, suitable for manifests."""
    return int(child_seed_sequence(master_seed, path).generate_state(1, np.uint64)[0])


def as_rng(rng) -> np.random.Generator:
    if isinstance(rng, np.random.Generator):
        return rng
    return np.random.default_rng(rng)
