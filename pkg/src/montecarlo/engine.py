from __future__ import annotations

import asyncio
from typing import Callable

import numpy as np

from src.config.settings import get_settings
from src.errors import DomainError
from src.montecarlo.rng import substream
from src.utils.logger import setup_logger

BlockSampler = Callable[[np.random.Generator, int], np.ndarray]


class MonteCarloEngine:
    """Runs a block sampler over fixed-size replicate blocks on a thread pool.

    The block plan depends only on reps and block_size, and blocks are merged
    in block order, so results do not depend on the worker count.
    """

    def __init__(self, seed: int, workers: int | None = None, block_size: int | None = None) -> None:
        settings = get_settings()
        self.seed = seed
        self.workers = workers or settings.workers
        self.block_size = block_size or settings.block_size
        self.logger = setup_logger("montecarlo.engine")

    def plan(self, reps: int) -> list[int]:
        if reps < 1:
            raise DomainError(f"reps must be positive, got {reps}")
        full, rest = divmod(reps, self.block_size)
        return [self.block_size] * full + ([rest] if rest else [])

    async def run(self, sampler: BlockSampler, reps: int, stream: str | int) -> np.ndarray:
        blocks = self.plan(reps)
        self.logger.debug("stream %s: %d reps in %d blocks on %d workers", stream, reps, len(blocks), self.workers)
        semaphore = asyncio.Semaphore(self.workers)

        async def _run_block(index: int, size: int) -> np.ndarray:
            async with semaphore:
                rng = substream(self.seed, stream, index)
                return await asyncio.to_thread(sampler, rng, size)

        results = await asyncio.gather(*[_run_block(index, size) for index, size in enumerate(blocks)])
        return np.concatenate([np.asarray(result) for result in results], axis=0)

    def run_sync(self, sampler: BlockSampler, reps: int, stream: str | int) -> np.ndarray:
        return asyncio.run(self.run(sampler, reps, stream))
