"""Kernel backend selection.

Prefers the compiled Cython kernels and falls back to the pure-numpy
implementation when the extension was not built.  Set BLOCKPURSUIT_PURE=1
to force the fallback (used by the backend-comparison benchmark).
"""

from __future__ import annotations

import os

if os.environ.get("BLOCKPURSUIT_PURE"):
    from . import _pykernels as _impl
else:
    try:
        from . import _ckernels as _impl  # type: ignore[no-redef]
    except ImportError:
        from . import _pykernels as _impl  # type: ignore[no-redef]

BACKEND = _impl.BACKEND
correlations = _impl.correlations
best_correlation = _impl.best_correlation
batch_best_correlation = _impl.batch_best_correlation
subtract_outer = _impl.subtract_outer
orthogonalize = _impl.orthogonalize
update_duals = _impl.update_duals


def backend_name() -> str:
    """Name of the active kernel backend: 'compiled' or 'python'."""
    return BACKEND
