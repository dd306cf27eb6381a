"""Deterministic splittable randomness.

All randomized stages draw from numpy's counter-based Philox generator.
A single root seed plus a path of string/int labels addresses a stream,
so independent stages (and retries within a stage) get independent
streams while runs stay reproducible bit-for-bit.
"""

from __future__ import annotations

import hashlib

import numpy as np


def stream(seed: int, *path: object) -> np.random.Generator:
    """Generator for the sub-stream addressed by (seed, *path)."""
    h = hashlib.blake2b(digest_size=16)
    h.update(str(int(seed)).encode())
    for part in path:
        h.update(b"/")
        h.update(str(part).encode())
    key = int.from_bytes(h.digest(), "little")
    return np.random.Generator(np.random.Philox(key=key))
