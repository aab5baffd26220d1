"""Pure-Python versions of the compiled kernels in ``_kernels.pyx``."""

from itertools import combinations

import numpy as np


def overlap_histogram(n, k, qmask):
    """Count k-subsets of range(n) by the size of their overlap with qmask."""
    if n < 1 or n > 63:
        raise ValueError("n must lie in [1, 63]")
    if k < 0 or k > n:
        raise ValueError("k must lie in [0, n]")
    ones = [(qmask >> i) & 1 for i in range(n)]
    counts = [0] * (k + 1)
    for subset in combinations(ones, k):
        counts[sum(subset)] += 1
    return counts


def batch_syndromes(stab_x, stab_z, err_x, err_z):
    """Syndrome word of each error: bit i set iff it anticommutes with stabilizer i."""
    if len(stab_x) != len(stab_z) or len(err_x) != len(err_z):
        raise ValueError("x and z arrays must have matching lengths")
    if len(stab_x) > 64:
        raise ValueError("at most 64 stabilizers")
    stabs = [(int(sx), int(sz)) for sx, sz in zip(stab_x, stab_z)]
    out = np.zeros(len(err_x), dtype=np.uint64)
    for i, (ex, ez) in enumerate(zip(err_x, err_z)):
        ex, ez = int(ex), int(ez)
        word = 0
        for s, (sx, sz) in enumerate(stabs):
            if ((ex & sz) ^ (ez & sx)).bit_count() & 1:
                word |= 1 << s
        out[i] = word
    return out
