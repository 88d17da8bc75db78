"""Seeded, portable randomness.

All stochastic steps draw from :class:`random.Random` (the Mersenne Twister,
whose sequence for a given integer seed is identical across platforms and
CPython versions). Sub-seeds for independent units of work are derived with
SHA-256 rather than ``hash()``, which is salted per process.
"""

from __future__ import annotations

import hashlib
import random

RNG_ALGORITHM = "mt19937"


def make_rng(seed: int) -> random.Random:
    """Return a generator whose draw sequence depends only on ``seed``."""
    return random.Random(seed)


def derive_seed(seed: int, *parts: str | int) -> int:
    """Derive a stable 64-bit sub-seed from a global seed and context parts.

    Used to give each dialogue (or pipeline stage) its own generator so that
    results do not depend on processing order or worker scheduling.
    """
    key = "|".join([str(seed), *map(str, parts)])
    digest = hashlib.sha256(key.encode("utf-8")).digest()
    return int.from_bytes(digest[:8], "big")
