"""Backend selection for the hot loops.

The compiled extension ``tracelab._ckernels`` is used when it was built;
otherwise the numpy fallback in ``tracelab._pykernels`` is used. Setting
``TRACELAB_PURE_PYTHON=1`` forces the fallback.
"""

import os

from . import _pykernels

BACKEND = "python"
corr_batch = _pykernels.corr_batch

if os.environ.get("TRACELAB_PURE_PYTHON", "") not in ("1", "true", "yes"):
    try:
        from . import _ckernels
    except ImportError:
        pass
    else:
        BACKEND = "cython"
        corr_batch = _ckernels.corr_batch


def resolve_threads(threads: int | None = None) -> int:
    """Explicit value, then TRACE_LAB_THREADS / TRACELAB_THREADS, then 1."""
    if threads is None:
        env = os.environ.get("TRACE_LAB_THREADS") or os.environ.get("TRACELAB_THREADS")
        threads = int(env) if env else 1
    return max(1, int(threads))
