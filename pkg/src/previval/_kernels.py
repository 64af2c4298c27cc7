"""Kernel selection: compiled core when available, numpy fallback otherwise.

Set ``PREVIVAL_PURE_PYTHON=1`` to force the fallback.
"""
from __future__ import annotations

import os

from . import _kernels_py

if os.environ.get("PREVIVAL_PURE_PYTHON", "").strip() not in ("", "0"):
    _ext = None
else:
    try:
        from . import _kernels_ext as _ext
    except ImportError:
        _ext = None

BACKEND = "cython" if _ext is not None else "python"
_impl = _ext if _ext is not None else _kernels_py

evolve_pairs = _impl.evolve_pairs
cross_reduced_grid = _impl.cross_reduced_grid
