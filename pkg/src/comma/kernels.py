"""Dispatch to the numba or pure-numpy kernels (see :mod:`comma._accel`)."""

from ._accel import BACKEND, USE_NUMBA

if USE_NUMBA:
    from ._kernels_numba import (  # noqa: F401
        CONTAINED,
        NONE,
        PRUNE_SLACK,
        TYPE_ONE,
        TYPE_TWO,
        disk_stamps,
        naive_circle,
        query_circle,
        query_endpoints,
        seg_circle,
    )
else:
    from ._kernels_numpy import (  # noqa: F401
        CONTAINED,
        NONE,
        PRUNE_SLACK,
        TYPE_ONE,
        TYPE_TWO,
        disk_stamps,
        naive_circle,
        query_circle,
        query_endpoints,
        seg_circle,
    )

__all__ = [
    "BACKEND",
    "CONTAINED",
    "NONE",
    "PRUNE_SLACK",
    "TYPE_ONE",
    "TYPE_TWO",
    "disk_stamps",
    "naive_circle",
    "query_circle",
    "query_endpoints",
    "seg_circle",
]
