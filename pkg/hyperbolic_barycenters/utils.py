# Copyright (c) 2024-2025 Datalayer, Inc.
#
# BSD 3-Clause License

"""Seeded random streams, chunked parallel execution and number formatting."""

from __future__ import annotations

import logging
import math

from typing import Callable, TypeVar

import anyio
import numpy as np

from hyperbolic_barycenters.errors import InvalidInputError


logger = logging.getLogger(__name__)


T = TypeVar("T")


# Number of trials (or quadruples) evaluated by one chunk.
DEFAULT_CHUNK_SIZE = 4096


# Stream tags keep independent purposes on disjoint Philox keys.
STREAM_POOL = 1
STREAM_QUADRUPLES = 2
STREAM_REPLICATION = 3
STREAM_EMPIRICAL = 4
STREAM_SPACE = 5
STREAM_CHECK = 100


def rng_stream(seed: int | None, *key: int) -> np.random.Generator:
    """Return a counter-based generator for the stream ``(seed, *key)``.

    The same key always yields the same draws, whatever the number of workers.
    """
    if seed is None:
        raise InvalidInputError("seed is required (no wall-clock default)")
    if int(seed) < 0 or any(int(k) < 0 for k in key):
        emsg = f"seed and stream keys must be non-negative, got seed={seed} key={key}"
        raise InvalidInputError(emsg)
    sequence = np.random.SeedSequence([int(seed), *(int(k) for k in key)])
    return np.random.Generator(np.random.Philox(sequence))


def chunk_bounds(total: int, chunk_size: int = DEFAULT_CHUNK_SIZE) -> list[tuple[int, int]]:
    """Split ``total`` items into ``(start, count)`` chunks of fixed size."""
    if total <= 0:
        return []
    n_chunks = math.ceil(total / chunk_size)
    return [
        (i * chunk_size, min(chunk_size, total - i * chunk_size))
        for i in range(n_chunks)
    ]


def map_chunks(fn: Callable[[int], T], n_chunks: int, threads: int = 1) -> list[T]:
    """Evaluate ``fn(chunk_index)`` for every chunk, results in chunk order.

    Work is dispatched to worker threads through anyio, capped at ``threads``.
    """
    if threads < 1:
        raise InvalidInputError(f"threads must be >= 1, got {threads}")
    if threads == 1 or n_chunks <= 1:
        return [fn(i) for i in range(n_chunks)]

    results: list = [None] * n_chunks

    async def _run() -> None:
        limiter = anyio.CapacityLimiter(threads)

        async def _one(index: int) -> None:
            results[index] = await anyio.to_thread.run_sync(fn, index, limiter=limiter)

        async with anyio.create_task_group() as tg:
            for index in range(n_chunks):
                tg.start_soon(_one, index)

    logger.debug(f"Dispatching {n_chunks} chunks on {threads} threads")
    anyio.run(_run)
    return results


def format_float(value: float) -> str:
    """Format a float with 17 significant digits (exact round trip)."""
    return format(float(value), ".17g")
