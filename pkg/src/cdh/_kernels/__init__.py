"""Hot-kernel backend selection.

Imports the compiled Cython core when present, otherwise the pure numpy/scipy
fallback.  Set CDH_PURE=1 to force the fallback (used by the equivalence tests
and the benchmark).
"""

from __future__ import annotations

import os

if os.environ.get("CDH_PURE"):
    from . import _pure as _backend
else:
    try:
        from . import _core as _backend  # type: ignore[attr-defined]
    except ImportError:
        from . import _pure as _backend

BACKEND = _backend.NAME
tridiag_steps = _backend.tridiag_steps
gauss_conv = _backend.gauss_conv

__all__ = ["BACKEND", "tridiag_steps", "gauss_conv"]
