"""Kernel selection: compiled extension when importable, else pure Python.

Set ``PLUMBLAT_PURE=1`` to force the fallback.
"""

from __future__ import annotations

import os

from . import _purekernels

BACKEND = "python"
subset_min = _purekernels.subset_min
f2_reduce = _purekernels.f2_reduce

if os.environ.get("PLUMBLAT_PURE", "") not in ("1", "true", "yes"):
    try:
        from . import _ckernels
    except ImportError:
        pass
    else:
        subset_min = _ckernels.subset_min
        f2_reduce = _ckernels.f2_reduce
        BACKEND = "cython"

__all__ = ["BACKEND", "subset_min", "f2_reduce"]
