"""Kernel backend selection.

The compiled extension is used when present; otherwise the numpy
implementations take over with identical semantics.  Set DAMPEDEULER_PURE=1
(before first import) to force the numpy backend.
"""

import os

from . import pure

if os.environ.get("DAMPEDEULER_PURE"):
    _impl = pure
else:
    try:
        from . import _speedups as _impl  # type: ignore[no-redef]
    except ImportError:
        _impl = pure

BACKEND = "numpy" if _impl is pure else "compiled"

diff1 = _impl.diff1
diff1_ghost = _impl.diff1_ghost
sym_rhs = _impl.sym_rhs
cons_rhs = _impl.cons_rhs
minmod = _impl.minmod
smooth_filter = _impl.smooth_filter

__all__ = [
    "BACKEND",
    "diff1",
    "diff1_ghost",
    "sym_rhs",
    "cons_rhs",
    "minmod",
    "smooth_filter",
    "pure",
]
