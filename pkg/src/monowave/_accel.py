"""Backend selection for the hot numeric kernels.

Every performance-critical kernel has two implementations: a numba
``@njit`` version and a pure-numpy one.  The default backend is chosen at
import time from the ``MONOWAVE_NO_NUMBA`` environment variable (set it to
``1`` to force the numpy path); individual calls can override the choice
with an explicit ``backend=`` argument, which is what the benchmark and
the parity tests use.
"""

import os

_FLAG = os.environ.get("MONOWAVE_NO_NUMBA", "").strip().lower()
NUMBA_REQUESTED = _FLAG not in ("1", "true", "yes")

try:
    import numba  # noqa: F401

    NUMBA_AVAILABLE = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    NUMBA_AVAILABLE = False

NUMBA_ENABLED = NUMBA_REQUESTED and NUMBA_AVAILABLE


def default_backend() -> str:
    return "numba" if NUMBA_ENABLED else "numpy"


def resolve_backend(backend=None) -> str:
    """Validate an explicit backend name or fall back to the default."""
    if backend is None:
        return default_backend()
    if backend not in ("numba", "numpy"):
        raise ValueError(f"unknown backend {backend!r}; expected 'numba' or 'numpy'")
    if backend == "numba" and not NUMBA_AVAILABLE:
        raise RuntimeError("numba backend requested but numba is not importable")
    return backend
