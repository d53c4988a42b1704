"""Kernel backend selection.

The compiled ``_kernels`` extension is used when importable; otherwise the
numpy ``_fallback``.  Setting ``ZGL_PURE_PYTHON=1`` forces the fallback.
"""

import os
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from . import _fallback

try:
    from . import _kernels as _compiled
except ImportError:  # extension not built
    _compiled = None

_BACKENDS = {"numpy": _fallback}
if _compiled is not None:
    _BACKENDS["cython"] = _compiled

_active = _fallback if os.environ.get("ZGL_PURE_PYTHON") or _compiled is None else _compiled


def available():
    return sorted(_BACKENDS)


def name():
    return _active.NAME


def kernels():
    return _active


def set_backend(backend_name):
    """Switch kernels globally; returns the previous backend name."""
    global _active
    if backend_name not in _BACKENDS:
        raise ValueError(f"unknown backend {backend_name!r}; available: {available()}")
    previous = _active.NAME
    _active = _BACKENDS[backend_name]
    return previous


def parallel_map(func, t, threads=1, min_chunk=4096):
    """Apply an elementwise kernel over ``t`` in contiguous shards.

    Shards are evaluated concurrently and reassembled in order, so the
    result does not depend on ``threads``.
    """
    t = np.ascontiguousarray(t, dtype=float)
    if threads <= 1 or t.size < 2 * min_chunk:
        return func(t)
    bounds = np.linspace(0, t.size, threads + 1).astype(int)
    shards = [t[bounds[i]:bounds[i + 1]] for i in range(threads)]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        parts = list(pool.map(func, shards))
    return np.concatenate(parts)
