"""Backend selection for the hot graph kernels.

The compiled extension is used when it imports; otherwise the pure-Python
module takes over. Setting ``CMCUTS_PURE_PYTHON=1`` forces the fallback.
"""

from __future__ import annotations

import os

from cmcuts import _pykernels

if os.environ.get("CMCUTS_PURE_PYTHON"):
    _impl = _pykernels
    BACKEND = "python"
else:
    try:
        from cmcuts import _ckernels as _impl
    except ImportError:
        _impl = _pykernels
        BACKEND = "python"
    else:
        BACKEND = "cython"

peel_core = _impl.peel_core
bfs_levels = _impl.bfs_levels
two_color = _impl.two_color
count_cycles = _impl.count_cycles
maxcut_flip = _impl.maxcut_flip
bisect_swap = _impl.bisect_swap
maxcut_exhaustive = _impl.maxcut_exhaustive


def available_backends():
    """Kernel modules importable in this environment, keyed by name."""
    out = {"python": _pykernels}
    try:
        from cmcuts import _ckernels
    except ImportError:
        pass
    else:
        out["cython"] = _ckernels
    return out
