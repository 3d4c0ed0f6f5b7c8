"""Kernel backend selection.

The environment variable NBPERC_BACKEND picks the implementation of the hot
loops:

    numpy  - force the pure numpy/Python fallback
    numba  - require the jitted backend (ImportError if numba is missing)
    auto   - default: numba when importable, else numpy

Both backends are bit-for-bit equivalent; see benchmarks/bench_backends.py
for the speed comparison.
"""

import os

from . import numpy_backend

_choice = os.environ.get("NBPERC_BACKEND", "auto").strip().lower()
if _choice not in {"auto", "numba", "numpy", ""}:
    raise ImportError(
        f"NBPERC_BACKEND={_choice!r} not understood; use auto, numba or numpy"
    )

if _choice == "numpy":
    _impl = numpy_backend
else:
    try:
        from . import numba_backend as _impl
    except ImportError:
        if _choice == "numba":
            raise
        _impl = numpy_backend

BACKEND = _impl.NAME

hashimoto_matvec = _impl.hashimoto_matvec
adjacency_matvec = _impl.adjacency_matvec
newman_ziff_trial = _impl.newman_ziff_trial
tree_reach = _impl.tree_reach


def active_backend():
    """Name of the kernel backend in use ('numba' or 'numpy')."""
    return BACKEND
