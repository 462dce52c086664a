"""Kernel backend selection.

Hot numeric loops (SVM hinge training, LDA Gibbs sweeps) exist in two
versions: a numba-jitted one and a pure-numpy/python fallback. The
fallback is selected when numba is unavailable or when the environment
variable JOBTALK_NO_NUMBA is set to a non-empty value, which is also how
the benchmark compares the two paths.
"""

import os


def _numba_enabled() -> bool:
    if os.environ.get("JOBTALK_NO_NUMBA"):
        return False
    try:
        import numba  # noqa: F401
    except ImportError:
        return False
    return True


USE_NUMBA = _numba_enabled()


def njit_or_fallback(fallback):
    """Decorator factory: jit the decorated function, or return `fallback`.

    The jitted function and the fallback must be call-compatible.
    """

    def wrap(fn):
        if not USE_NUMBA:
            return fallback
        from numba import njit

        return njit(cache=True)(fn)

    return wrap
