"""Backend switch for the hot kernels.

Set ``COMMA_NUMBA=0`` in the environment before importing :mod:`comma` to run
the pure-numpy kernels instead of the numba-compiled ones.  The choice is made
once, at import time.
"""

import os

_FLAG = os.environ.get("COMMA_NUMBA", "1").strip().lower()

try:
    import numba  # noqa: F401

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    HAVE_NUMBA = False

USE_NUMBA = HAVE_NUMBA and _FLAG not in ("0", "false", "no", "off")
BACKEND = "numba" if USE_NUMBA else "numpy"
