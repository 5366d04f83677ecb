"""Kernel backend selection.

The compiled ``_speedups`` extension is used when it was built; otherwise the
pure-Python module is used.  Setting ``LK_PURE_PYTHON=1`` forces the fallback.
"""

import os

from . import _kernels_py

if os.environ.get("LK_PURE_PYTHON", "") not in ("", "0"):
    _impl = _kernels_py
else:
    try:
        from . import _speedups as _impl
    except ImportError:
        _impl = _kernels_py

BACKEND = _impl.BACKEND
shift = _impl.shift
axpy = _impl.axpy
reduce_vector = _impl.reduce_vector
rref = _impl.rref
rank = _impl.rank


def available_backends():
    """Modules implementing the kernel API that can be imported here."""
    out = {"python": _kernels_py}
    try:
        from . import _speedups
        out["cython"] = _speedups
    except ImportError:
        pass
    return out
