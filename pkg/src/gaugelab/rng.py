"""Deterministic, splittable random streams.

All randomness in the package flows through counter-based Philox4x64-10
generators keyed by ``(seed, index)``.  Stream ``index`` identifies one
logical draw (one path, one sphere sample, ...), so a batch of size N can be
produced in any order, in parallel, or as a prefix of a larger batch without
changing a single bit of output.
"""

from __future__ import annotations

import hashlib

import numpy as np

MASK64 = (1 << 64) - 1


def stream(seed: int, index: int = 0) -> np.random.Generator:
    """Generator for logical stream ``index`` under master ``seed``."""
    return np.random.Generator(np.random.Philox(key=[seed & MASK64, index & MASK64]))


def derive_seed(seed: int, *labels) -> int:
    """Stable 64-bit sub-seed for a named purpose.

    Uses BLAKE2b over the decimal seed and the labels, so the result does not
    depend on interpreter hash randomization, platform, or call order.
    """
    h = hashlib.blake2b(digest_size=8)
    h.update(str(seed & MASK64).encode())
    for label in labels:
        h.update(b"/")
        h.update(str(label).encode())
    return int.from_bytes(h.digest(), "big")
