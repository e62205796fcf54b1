"""Kernel backend selection.

The compiled extension (stackseek._core) is preferred when importable; the
numpy fallback has identical semantics.  Set STACKSEEK_PURE_PYTHON=1 to pin
the fallback (used by the parity tests and the benchmark).
"""

import os

from . import kernels_py

if os.environ.get("STACKSEEK_PURE_PYTHON"):
    _impl = kernels_py
else:
    try:
        from stackseek import _core as _impl
    except ImportError:
        _impl = kernels_py

BACKEND = _impl.BACKEND_NAME

dual_project = _impl.dual_project
solve_affine = _impl.solve_affine
