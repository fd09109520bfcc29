"""Backend selection for the hot kernels.

The compiled extension is used when it imports; otherwise the numpy
fallback.  Setting ``FOLDGATE_PURE=1`` forces the fallback.
"""

from __future__ import annotations

import os

from . import _pykernels

if os.environ.get("FOLDGATE_PURE", "") not in ("", "0"):
    _impl = _pykernels
else:
    try:
        from . import _ckernels as _impl  # type: ignore[attr-defined]
    except ImportError:  # extension not built
        _impl = _pykernels

BACKEND: str = _impl.BACKEND
rref = _impl.rref
min_weight = _impl.min_weight
vec_images = _impl.vec_images
mat_mul = _impl.mat_mul
point_images = _impl.point_images
sift = _impl.sift

__all__ = ["BACKEND", "rref", "min_weight", "vec_images", "mat_mul", "point_images", "sift"]
