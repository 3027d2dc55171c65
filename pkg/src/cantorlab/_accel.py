"""Numba switch.

Set ``CANTORLAB_NUMBA=0`` to force the pure-numpy kernels.  When numba is
missing the numpy path is used regardless of the flag.
"""

from __future__ import annotations

import os

try:
    import numba
except ImportError:  # pragma: no cover - numba is a declared dependency
    numba = None

_flag = os.environ.get("CANTORLAB_NUMBA", "1").strip().lower()
USE_NUMBA = numba is not None and _flag not in ("0", "false", "no", "off")


def njit(*args, **kwargs):
    """``numba.njit`` that degrades to the identity when numba is off."""
    kwargs.setdefault("cache", True)
    if numba is None:
        if len(args) == 1 and callable(args[0]) and not kwargs:
            return args[0]
        return lambda fn: fn
    return numba.njit(*args, **kwargs)
