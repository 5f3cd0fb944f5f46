"""Backend selection for the hot kernels.

Set ``QLDPC_BEAM_DISABLE_NUMBA=1`` before import to force the pure-numpy
kernels, e.g. on platforms without a working numba or when debugging.
"""

import logging
import os

DISABLE_ENV = "QLDPC_BEAM_DISABLE_NUMBA"


def _env_disabled() -> bool:
    return os.environ.get(DISABLE_ENV, "").strip().lower() in ("1", "true", "yes", "on")


try:
    if _env_disabled():
        raise ImportError(f"{DISABLE_ENV} is set")
    import numba

    logging.getLogger("numba").setLevel(logging.WARNING)
    HAVE_NUMBA = True
except ImportError:
    numba = None
    HAVE_NUMBA = False


def njit(func):
    """``numba.njit(cache=True)`` when numba is active, identity otherwise."""
    if HAVE_NUMBA:
        return numba.njit(cache=True, nogil=True)(func)
    return func
