"""Counter-based substreams.

A master seed never feeds a generator directly. Block b of stream s draws
from Philox keyed by SeedSequence(seed, spawn_key=(s, b)), so every block has
its own key and any block can be regenerated in isolation. Streams are named;
the name maps to its id through CRC-32, which is stable across runs and
platforms.
"""

from __future__ import annotations

import zlib

import numpy as np

from src.config.settings import get_settings
from src.errors import ConfigError


def stream_id(name: str | int) -> int:
    if isinstance(name, int):
        return name
    return zlib.crc32(name.encode("utf-8"))


def substream(seed: int, stream: str | int, block: int) -> np.random.Generator:
    sequence = np.random.SeedSequence(seed, spawn_key=(stream_id(stream), block))
    return np.random.Generator(np.random.Philox(sequence))


def resolve_seed(seed: int | None) -> int:
    """The explicit seed, else GCPLAB_SEED; MC work without either is refused."""
    if seed is not None:
        return seed
    configured = get_settings().seed
    if configured is None:
        raise ConfigError("a seed is required for Monte Carlo work (pass --seed or set GCPLAB_SEED)")
    return configured
