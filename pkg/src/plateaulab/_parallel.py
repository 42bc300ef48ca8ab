"""Fixed-size trial chunking with an optional process pool.

Chunk boundaries never depend on the worker count and every trial owns
its own random stream, so merged results are identical for any number of
workers (floating-point sums included: partials are reduced in chunk
order).
"""
from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor

TRIAL_CHUNK = 1000


def chunk_ranges(total: int, chunk: int = TRIAL_CHUNK) -> list[tuple[int, int]]:
    return [(s, min(chunk, total - s)) for s in range(0, total, chunk)]


def run_chunks(fn, arg_tuples: list[tuple], workers: int = 1) -> list:
    """Apply fn to each args tuple, in order; fan out across processes if asked."""
    if workers <= 1 or len(arg_tuples) <= 1:
        return [fn(*args) for args in arg_tuples]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        futures = [pool.submit(fn, *args) for args in arg_tuples]
        return [f.result() for f in futures]
