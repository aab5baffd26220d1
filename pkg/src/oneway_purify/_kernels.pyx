# cython: language_level=3
"""Compiled inner loops. Must stay behaviourally identical to _kernels_py."""

from libc.stdint cimport uint64_t

import numpy as np


cdef extern from *:
    int __builtin_popcountll(unsigned long long) nogil
    int __builtin_ctzll(unsigned long long) nogil


def overlap_histogram(int n, int k, unsigned long long qmask):
    """Count k-subsets of range(n) by the size of their overlap with qmask."""
    if n < 1 or n > 63:
        raise ValueError("n must lie in [1, 63]")
    if k < 0 or k > n:
        raise ValueError("k must lie in [0, n]")
    cdef unsigned long long counts[64]
    cdef unsigned long long subset, c, r, limit
    cdef int j
    for j in range(64):
        counts[j] = 0
    limit = (<unsigned long long>1) << n
    if k == 0:
        counts[0] = 1
        return [int(counts[j]) for j in range(k + 1)]
    qmask &= limit - 1
    subset = ((<unsigned long long>1) << k) - 1
    with nogil:
        while subset < limit:
            counts[__builtin_popcountll(subset & qmask)] += 1
            # Gosper's hack: next integer with the same popcount
            c = subset & (~subset + 1)
            r = subset + c
            subset = (((r ^ subset) >> 2) // c) | r
    return [int(counts[j]) for j in range(k + 1)]


def batch_syndromes(const uint64_t[:] stab_x, const uint64_t[:] stab_z,
                    const uint64_t[:] err_x, const uint64_t[:] err_z):
    """Syndrome word of each error: bit i set iff it anticommutes with stabilizer i."""
    cdef Py_ssize_t m = stab_x.shape[0]
    cdef Py_ssize_t e = err_x.shape[0]
    if stab_z.shape[0] != m or err_z.shape[0] != e:
        raise ValueError("x and z arrays must have matching lengths")
    if m > 64:
        raise ValueError("at most 64 stabilizers")
    out = np.zeros(e, dtype=np.uint64)
    cdef uint64_t[:] res = out
    cdef Py_ssize_t i, s
    cdef uint64_t word, ex, ez
    with nogil:
        for i in range(e):
            ex = err_x[i]
            ez = err_z[i]
            word = 0
            for s in range(m):
                if __builtin_popcountll((ex & stab_z[s]) ^ (ez & stab_x[s])) & 1:
                    word |= (<uint64_t>1) << s
            res[i] = word
    return out
