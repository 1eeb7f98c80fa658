"""Seeded random streams.

Every random draw in the package comes from ``numpy.random.Generator`` backed
by the Philox4x64 counter-based bit generator, seeded with
``numpy.random.SeedSequence(seed)``.  Per-trial seeds are derived as the first
64-bit word of ``SeedSequence([seed, trial]).generate_state(1, uint64)``.
"""

import numpy as np

MASK64 = (1 << 64) - 1


def make_rng(seed):
    """Return a Philox-backed Generator for a 64-bit integer seed."""
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(int(seed) & MASK64)))


def derive_seed(seed, index):
    """Deterministic child seed for trial/restart ``index``."""
    ss = np.random.SeedSequence([int(seed) & MASK64, int(index)])
    return int(ss.generate_state(1, dtype=np.uint64)[0])
