"""Seeded counter-based normal streams.

A stream is addressed by ``(seed, counter)``.  Row ``i`` of a sample matrix
always consumes counters ``i*width .. i*width+width-1``, so a chunk starting
at row ``r`` is the substream ``(seed, r)`` and chunking never changes the
draws.
"""

import numpy as np

from . import kernels

_MASK = 0xFFFF_FFFF_FFFF_FFFF


def stream_key(seed: int) -> np.uint64:
    """Scramble a user seed into a 64-bit stream key."""
    z = np.array([int(seed) & _MASK], dtype=np.uint64)
    return kernels._numpy.splitmix64(z)[0]


def normal_block(seed: int, start_row: int, n_rows: int, width: int) -> np.ndarray:
    """Standard normals for rows ``start_row .. start_row+n_rows-1``."""
    return kernels.counter_normals(stream_key(seed), int(start_row), int(n_rows), int(width))
