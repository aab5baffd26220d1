"""Compare the compiled kernels against the pure-Python fallback.

    python3 benchmarks/bench_kernels.py [--repeat 5]
"""

import argparse
import itertools
import timeit

import numpy as np

from oneway_purify import _kernels_py
from oneway_purify.codes import surface_d3

try:
    from oneway_purify import _kernels
except ImportError:
    _kernels = None


def _syndrome_inputs():
    code = surface_d3()
    sx = np.array([s.x for s in code.stabilizers], dtype=np.uint64)
    sz = np.array([s.z for s in code.stabilizers], dtype=np.uint64)
    # every Pauli on 9 qubits: x and z range independently over all masks
    xs, zs = zip(*itertools.product(range(512), repeat=2))
    return sx, sz, np.array(xs, dtype=np.uint64), np.array(zs, dtype=np.uint64)


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args(argv)

    mask = 0b10110011101001011011  # n=20, weight 12
    syn = _syndrome_inputs()
    cases = [
        ("overlap_histogram n=20 k=10", lambda m: m.overlap_histogram(20, 10, mask)),
        ("batch_syndromes surface_d3, 4^9 Paulis", lambda m: m.batch_syndromes(*syn)),
    ]
    backends = [("python", _kernels_py)] + ([("cython", _kernels)] if _kernels else [])
    if _kernels is None:
        print("compiled extension not built; timing the Python fallback only")

    print(f"{'kernel':42s} {'backend':8s} {'best [s]':>10s} {'speedup':>8s}")
    for name, fn in cases:
        ref_time = None
        ref_out = None
        for label, mod in backends:
            out = fn(mod)
            if ref_out is None:
                ref_out = np.asarray(out)
            elif not np.array_equal(ref_out, np.asarray(out)):
                raise SystemExit(f"{name}: backends disagree")
            best = min(timeit.repeat(lambda: fn(mod), number=1, repeat=args.repeat))
            ref_time = ref_time or best
            print(f"{name:42s} {label:8s} {best:10.4f} {ref_time / best:7.1f}x")


if __name__ == "__main__":
    main()
