"""Numba switch.

Set ``SIEVEKIT_DISABLE_NUMBA=1`` to force the pure-numpy kernels.
"""
import os

DISABLE_ENV = "SIEVEKIT_DISABLE_NUMBA"

try:
    import numba
except ImportError:  # pragma: no cover - numba is a declared dependency
    numba = None


def numba_enabled():
    if numba is None:
        return False
    return os.environ.get(DISABLE_ENV, "").strip().lower() not in ("1", "true", "yes")


def njit(fn):
    """Compile ``fn`` with numba when available; otherwise return it untouched."""
    if numba is None:
        return fn
    return numba.njit(cache=True, nogil=True)(fn)
