"""Reproducible random streams.

All randomness flows through numpy's PCG64 generator. Sub-streams are derived
from a master seed and a fixed string label, so that e.g. the third k-means++
round or a particular node of a divisive tree always sees the same draws
regardless of what ran before it.
"""
from __future__ import annotations

import hashlib

import numpy as np


def _label_key(label: str) -> int:
    digest = hashlib.blake2b(label.encode("utf-8"), digest_size=8).digest()
    return int.from_bytes(digest, "little")


def make_rng(seed=None) -> np.random.Generator:
    """Return a Generator; pass-through if `seed` already is one."""
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.Generator(np.random.PCG64(seed))


def derive(seed: int, *labels: str) -> np.random.Generator:
    """Generator for the stream named by `labels` under master `seed`."""
    key = tuple(_label_key(str(lab)) for lab in labels)
    ss = np.random.SeedSequence(entropy=int(seed), spawn_key=key)
    return np.random.Generator(np.random.PCG64(ss))


def child_seed(rng: np.random.Generator) -> int:
    """Draw a master seed for labelled sub-streams from an existing generator."""
    return int(rng.integers(0, 2**63 - 1))
