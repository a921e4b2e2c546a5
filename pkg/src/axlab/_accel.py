"""Optional numba acceleration.

Set ``AXLAB_DISABLE_NUMBA=1`` to force the pure-numpy kernels (useful for
debugging and for the benchmark comparison).
"""
import os

DISABLED = os.environ.get("AXLAB_DISABLE_NUMBA", "").strip().lower() in ("1", "true", "yes")

try:
    if DISABLED:
        raise ImportError("disabled by AXLAB_DISABLE_NUMBA")
    from numba import njit as _njit

    HAVE_NUMBA = True

    def njit(func):
        return _njit(cache=True, nogil=True)(func)

except ImportError:
    HAVE_NUMBA = False

    def njit(func):
        return func
