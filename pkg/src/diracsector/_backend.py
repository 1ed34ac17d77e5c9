"""Kernel backend selection.

Hot loops are written once in a numba-compatible subset of Python and compiled
with ``numba.njit`` when numba is importable.  Setting the environment variable
``DIRACSECTOR_BACKEND=numpy`` (read at import time) switches every kernel to its
pure numpy/scipy counterpart instead.
"""

import os

try:
    import numba
except ImportError:  # pragma: no cover - numba is a declared dependency
    numba = None

_requested = os.environ.get("DIRACSECTOR_BACKEND", "numba").strip().lower()
if _requested not in ("numba", "numpy"):
    raise ImportError(f"DIRACSECTOR_BACKEND must be 'numba' or 'numpy', got {_requested!r}")

HAVE_NUMBA = numba is not None
BACKEND = "numba" if (_requested == "numba" and HAVE_NUMBA) else "numpy"


def njit(fn):
    """Compile ``fn`` with numba if available, else return it unchanged."""
    if numba is None:
        return fn
    return numba.njit(cache=True, nogil=True)(fn)
