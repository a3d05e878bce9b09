"""Optional numba acceleration for the hot numeric kernels.

Set ``KREIN_RICCATI_NUMBA=0`` to run every kernel as plain numpy code.
Kernels are always reachable uncompiled through ``kernel.py_func``.
"""
import os

try:
    import numba
except ImportError:  # pragma: no cover - numba is a declared dependency
    numba = None

NUMBA_AVAILABLE = numba is not None
USE_NUMBA = NUMBA_AVAILABLE and os.environ.get("KREIN_RICCATI_NUMBA", "1") != "0"


def kernel(fn):
    """Compile ``fn`` with ``numba.njit`` when enabled, else return it as is."""
    if USE_NUMBA:
        return numba.njit(cache=True, nogil=True)(fn)
    fn.py_func = fn
    return fn


def thread_count():
    """Worker cap from ``KREIN_RICCATI_THREADS`` (default 1, i.e. serial)."""
    try:
        return max(1, int(os.environ.get("KREIN_RICCATI_THREADS", "1")))
    except ValueError:
        return 1


def parallel_map(fn, items):
    """Map ``fn`` over ``items`` with a thread pool; result order is input order."""
    items = list(items)
    workers = min(thread_count(), len(items))
    if workers <= 1:
        return [fn(item) for item in items]
    from concurrent.futures import ThreadPoolExecutor

    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))
