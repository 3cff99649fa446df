"""Backend selection for the hot loops.

The compiled ``_ckernels`` extension is used when importable; otherwise, or
when the environment variable ``OU_BOUNDS_PURE_PYTHON`` is set to a non-empty
value other than ``0``, the pure-Python ``_pykernels`` take over.
"""

import os

from . import _pykernels

_force_python = os.environ.get("OU_BOUNDS_PURE_PYTHON", "") not in ("", "0")

try:
    if _force_python:
        raise ImportError("pure-Python backend requested")
    from . import _ckernels as _impl

    BACKEND = "cython"
except ImportError:
    _impl = _pykernels
    BACKEND = "python"

ar1_paths = _impl.ar1_paths
tridiag_inverse_band = _impl.tridiag_inverse_band

__all__ = ["BACKEND", "ar1_paths", "tridiag_inverse_band"]
