"""Kernel backend selection.

The compiled extension is used when it imports; set ``OWEP_PURE_PYTHON=1``
to force the pure-Python kernels.
"""

import os

from . import _kernels_py

if os.environ.get("OWEP_PURE_PYTHON"):
    _impl = _kernels_py
    BACKEND = "python"
else:
    try:
        from . import _kernels as _impl
        BACKEND = "cython"
    except ImportError:
        _impl = _kernels_py
        BACKEND = "python"

overlap_histogram = _impl.overlap_histogram
batch_syndromes = _impl.batch_syndromes

__all__ = ["BACKEND", "overlap_histogram", "batch_syndromes"]
