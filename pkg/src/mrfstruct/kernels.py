"""Backend selection for the numeric kernels.

The compiled numba kernels are used when available. Setting the environment
variable ``MRFSTRUCT_NO_NUMBA=1`` (or any non-empty value other than ``0``)
before import forces the pure-numpy fallback; so does a missing or broken
numba install. Both paths return bit-identical arrays, which the test suite
checks directly.
"""

from __future__ import annotations

import os

NO_NUMBA_ENV = "MRFSTRUCT_NO_NUMBA"


def _env_disabled() -> bool:
    val = os.environ.get(NO_NUMBA_ENV, "")
    return val not in ("", "0")


_backend_name = "numpy"
if not _env_disabled():
    try:
        from ._kernels_numba import ising_gibbs, mixed_knn_stats  # noqa: F401

        _backend_name = "numba"
    except ImportError:
        pass
if _backend_name == "numpy":
    from ._kernels_numpy import ising_gibbs, mixed_knn_stats  # noqa: F401


def backend_name() -> str:
    """Which kernel implementation is active: ``"numba"`` or ``"numpy"``."""
    return _backend_name


__all__ = ["backend_name", "ising_gibbs", "mixed_knn_stats", "NO_NUMBA_ENV"]
