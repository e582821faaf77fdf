"""Kernel backend selected at import time.

The compiled extension ``parosc._core`` is used when it was built; otherwise
the NumPy implementations in ``parosc._kernels_py`` are used. Setting
``PAROSC_PURE_PYTHON=1`` forces the fallback.
"""

import os

from . import _kernels_py

if os.environ.get("PAROSC_PURE_PYTHON", "") not in ("", "0"):
    _impl = _kernels_py
    BACKEND = "python"
else:
    try:
        from . import _core as _impl

        BACKEND = "cython"
    except ImportError:
        _impl = _kernels_py
        BACKEND = "python"

cn_propagate = _impl.cn_propagate
hyp2f1_series = _impl.hyp2f1_series


def available_backends():
    """Map of backend name to kernel module for every importable backend."""
    out = {"python": _kernels_py}
    try:
        from . import _core

        out["cython"] = _core
    except ImportError:
        pass
    return out
