"""Hot numeric kernels.

Every kernel has a numba-compiled path and a pure-numpy path. The active
path is chosen once at import time from the ``HYBRIDFIT_KERNELS``
environment variable (``numba`` or ``numpy``). The numba path is the default
whenever numba imports cleanly.
"""
import os

try:
    import numba
except ImportError:  # pragma: no cover - numba is an optional accelerator
    numba = None

HAVE_NUMBA = numba is not None
REQUESTED = os.environ.get("HYBRIDFIT_KERNELS", "numba").strip().lower()
if REQUESTED not in ("numba", "numpy"):
    raise ImportError(f"HYBRIDFIT_KERNELS must be 'numba' or 'numpy', got {REQUESTED!r}")
USE_NUMBA = HAVE_NUMBA and REQUESTED == "numba"


def njit(*args, **kwargs):
    """``numba.njit`` with caching on, or a no-op decorator without numba."""
    if not HAVE_NUMBA:
        if len(args) == 1 and callable(args[0]) and not kwargs:
            return args[0]
        return lambda fn: fn
    kwargs.setdefault("cache", True)
    return numba.njit(*args, **kwargs)


def active_backend():
    return "numba" if USE_NUMBA else "numpy"
