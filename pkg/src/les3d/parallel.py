"""Worker-count resolution and order-preserving chunked map.

Results never depend on the worker count: work is split into fixed chunks,
each chunk is computed independently, and outputs are reassembled in
submission order. ``LES3D_THREADS`` caps the effective worker count.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor

ENV_THREADS = "LES3D_THREADS"


def resolve_workers(requested: int | None) -> int:
    workers = 1 if requested is None else max(1, int(requested))
    cap = os.environ.get(ENV_THREADS)
    if cap:
        try:
            workers = min(workers, max(1, int(cap)))
        except ValueError:
            pass
    return workers


def chunked_map(fn, chunks, workers: int) -> list:
    """Apply ``fn`` to each chunk, preserving chunk order in the result."""
    chunks = list(chunks)
    if workers <= 1 or len(chunks) <= 1:
        return [fn(c) for c in chunks]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, chunks))
