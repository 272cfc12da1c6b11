"""Seeded random streams.

Every stream is a numpy ``Philox`` (counter-based, 4x64, 10 rounds) bit
generator keyed by ``(seed, purpose)``.  Distinct purposes never share
draws, and the same key reproduces the same stream bit for bit.
"""

from __future__ import annotations

import zlib

import numpy as np

ALGORITHM = "Philox-4x64-10"


def _tag_words(purpose: str | tuple) -> list[int]:
    if isinstance(purpose, tuple):
        words = []
        for part in purpose:
            words.extend(_tag_words(part))
        return words
    if isinstance(purpose, int):
        return [purpose & 0xFFFFFFFF, (purpose >> 32) & 0xFFFFFFFF]
    return [zlib.crc32(str(purpose).encode("utf-8"))]


def stream(seed: int, purpose: str | tuple = "default") -> np.random.Generator:
    """Independent generator for ``(seed, purpose)``."""
    seed = int(seed)
    if seed < 0:
        raise ValueError("seed must be non-negative")
    entropy = [seed & 0xFFFFFFFF, (seed >> 32) & 0xFFFFFFFF, *_tag_words(purpose)]
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(entropy)))
