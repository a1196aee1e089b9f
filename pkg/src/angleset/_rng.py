"""Block-seeded random streams.

Work is cut into fixed-size blocks and block ``b`` always draws from the
substream ``SeedSequence(seed, spawn_key=(b,))``.  Shards only decide which
blocks they process, so results do not depend on the shard count.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor

import numpy as np

BLOCK = 8192


def block_sizes(n: int, block: int = BLOCK) -> list[int]:
    full, rest = divmod(int(n), block)
    return [block] * full + ([rest] if rest else [])


def block_rng(seed: int, index: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence(int(seed), spawn_key=(int(index),)))


def map_blocks(fn, n: int, seed: int, n_jobs: int = 1, block: int = BLOCK):
    """Call ``fn(rng, size, index)`` for every block; results in block order."""
    sizes = block_sizes(n, block)
    tasks = [(block_rng(seed, i), s, i) for i, s in enumerate(sizes)]
    if n_jobs <= 1 or len(tasks) <= 1:
        return [fn(*t) for t in tasks]
    with ThreadPoolExecutor(max_workers=n_jobs) as pool:
        return list(pool.map(lambda t: fn(*t), tasks))
