"""Backend selection for the hot numerical kernels.

The compiled Cython extension is preferred when present; the pure-numpy
fallback gives identical results (to rounding) and is selected automatically
when the extension is missing, or explicitly with PAIRTEL_BACKEND=python.
"""

import os

from . import _kernels_py

_requested = os.environ.get("PAIRTEL_BACKEND", "auto")
if _requested not in ("auto", "python", "compiled"):
    raise RuntimeError(f"PAIRTEL_BACKEND must be auto|python|compiled, got {_requested!r}")

_impl = _kernels_py
if _requested != "python":
    try:
        from . import _kernels as _compiled
        _impl = _compiled
    except ImportError:
        if _requested == "compiled":
            raise

fidelity_series_sum = _impl.fidelity_series_sum
displaced_coherent_overlaps = _impl.displaced_coherent_overlaps


def backend_name() -> str:
    """Which kernel implementation is active: 'compiled' or 'python'."""
    return _impl.BACKEND_NAME
