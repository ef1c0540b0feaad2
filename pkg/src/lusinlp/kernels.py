"""Kernel dispatch: the compiled extension when available, NumPy otherwise.

Set ``LUSINLP_PURE=1`` to force the NumPy fallback.
"""

from __future__ import annotations

import os

from . import _pykernels

BACKEND = "python"
_impl = _pykernels

if os.environ.get("LUSINLP_PURE", "") not in ("1", "true", "yes"):
    try:
        from . import _ckernels as _impl  # type: ignore[no-redef]

        BACKEND = "cython"
    except ImportError:
        pass

pair_modulus = _impl.pair_modulus
pairwise_sup = _impl.pairwise_sup
affine_power_integral = _impl.affine_power_integral

__all__ = ["BACKEND", "pair_modulus", "pairwise_sup", "affine_power_integral"]
