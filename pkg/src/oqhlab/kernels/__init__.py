"""Hot loops, compiled with numba unless ``OQHLAB_NO_NUMBA`` is set to a non-empty, non-"0" value.

Both backends are importable as ``kernels.numpy_backend`` and (when numba is
installed) ``kernels.numba_backend`` for cross-checking and benchmarking.
"""
from __future__ import annotations

import os

from . import _np as numpy_backend

try:
    from . import _nb as numba_backend
except ImportError:  # pragma: no cover - numba is a declared dependency
    numba_backend = None

USE_NUMBA = numba_backend is not None and os.environ.get("OQHLAB_NO_NUMBA", "") in ("", "0")
backend = numba_backend if USE_NUMBA else numpy_backend
BACKEND_NAME = "numba" if USE_NUMBA else "numpy"

quad_phase = backend.quad_phase
conv_direct = backend.conv_direct
mj_sum = backend.mj_sum
mtrunc_sum = backend.mtrunc_sum
osc_quad = backend.osc_quad
nudft = backend.nudft
mhl = backend.mhl
gauss_exact = backend.gauss_exact

__all__ = [
    "BACKEND_NAME", "USE_NUMBA", "numpy_backend", "numba_backend",
    "quad_phase", "conv_direct", "mj_sum", "mtrunc_sum", "osc_quad", "nudft", "mhl", "gauss_exact",
]
