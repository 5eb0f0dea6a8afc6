"""Seeded random streams.

Every stochastic step in the toolkit (dataset sampling, embedding
initialisation, epoch shuffling) draws from numpy's Philox4x64-10
counter-based generator.  Philox output is defined by the published
Random123 algorithm rather than by platform word size or libc, so a
given seed reproduces the same stream on every platform numpy supports.
"""

import numpy as np


def make_rng(seed: int) -> np.random.Generator:
    if seed < 0:
        raise ValueError(f"seed must be non-negative, got {seed}")
    return np.random.Generator(np.random.Philox(seed))
