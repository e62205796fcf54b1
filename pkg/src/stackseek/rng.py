"""Seeded random streams.

All randomness in the library flows through numpy's Philox counter-based
generator (Philox 4x32-10).  Philox produces the same bit stream for the
same key on every platform, which is what makes traces reproducible and
lets replicate seeds be derived by simple increments.
"""

import numpy as np


def make_rng(seed):
    """Return a Generator backed by Philox; pass Generators through unchanged."""
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.Generator(np.random.Philox(key=int(seed)))
