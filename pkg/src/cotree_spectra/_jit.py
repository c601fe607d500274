"""Optional numba acceleration.

Set ``COTREE_SPECTRA_NO_NUMBA=1`` to run every kernel as plain Python/numpy.
"""
import os

_DISABLED = os.environ.get("COTREE_SPECTRA_NO_NUMBA", "").strip().lower() in ("1", "true", "yes")

try:
    from numba import njit as _njit
except ImportError:  # pragma: no cover
    _njit = None

USE_NUMBA = _njit is not None and not _DISABLED


def jit(func):
    """Compile ``func`` with ``numba.njit(cache=True)`` unless disabled.

    The undecorated function stays reachable as ``func.py_func`` in both
    cases so the benchmark can time the two paths side by side.
    """
    if not USE_NUMBA:
        func.py_func = func
        return func
    return _njit(cache=True)(func)
