"""Numba acceleration switch.

Hot kernels are written in a numba-compatible subset of numpy and decorated
with :func:`maybe_njit`. By default they are JIT-compiled; setting the
environment variable ``DFMSIM_NUMBA=0`` (or numba being unavailable) runs the
identical source uncompiled, which keeps one set of numerics for both paths.
The flag is read once at import time.
"""

import os


def _numba_enabled() -> bool:
    flag = os.environ.get("DFMSIM_NUMBA", "1").strip().lower()
    if flag in ("0", "false", "no", "off"):
        return False
    try:
        import numba  # noqa: F401
    except ImportError:
        return False
    return True


NUMBA_ENABLED = _numba_enabled()

if NUMBA_ENABLED:
    from numba import njit as _njit

    def maybe_njit(*args, **kwargs):
        kwargs.setdefault("cache", True)
        return _njit(*args, **kwargs)

else:

    def maybe_njit(*args, **kwargs):
        # Plain pass-through: kernels run as ordinary Python/numpy.
        if len(args) == 1 and callable(args[0]):
            return args[0]

        def wrap(func):
            return func

        return wrap
