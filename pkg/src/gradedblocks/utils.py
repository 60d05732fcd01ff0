"""Seeded randomness and small shared helpers.

Random searches derive their generator from (seed, label) through sha256,
never from object ids or hash randomization, so a fixed CLI seed pins
every stochastic choice in the pipeline.
"""

from __future__ import annotations

import hashlib
import random


def stable_seed(seed: int, label: str) -> int:
    digest = hashlib.sha256(f"{seed}:{label}".encode()).digest()
    return int.from_bytes(digest[:8], "big")


def rng_for(seed: int, label: str) -> random.Random:
    return random.Random(stable_seed(seed, label))


def random_vector(rng: random.Random, field, n: int) -> list[int]:
    return [rng.randrange(field.q) for _ in range(n)]


def random_nonzero_vector(rng: random.Random, field, n: int) -> list[int]:
    while True:
        v = random_vector(rng, field, n)
        if any(v):
            return v


class ResourceLimit(Exception):
    """Raised when an exhaustive search would exceed its configured bound."""
