"""Kernel backend selection.

Imports the compiled kernels when available, else the pure-Python fallback.
Set ``ZETAKMS_PURE_PYTHON=1`` to force the fallback (used by the benchmark
and the backend-equivalence tests).  Both backends are bit-compatible; only
speed differs.
"""

from __future__ import annotations

import os

if os.environ.get("ZETAKMS_PURE_PYTHON", "") == "1":
    from zetakms import _kernels_py as kernels
else:
    try:
        from zetakms import _kernels as kernels  # type: ignore[attr-defined]
    except ImportError:
        from zetakms import _kernels_py as kernels

BACKEND = kernels.BACKEND_NAME

neumaier_sum = kernels.neumaier_sum
neumaier_sum_c = kernels.neumaier_sum_c
sieve_arrays = kernels.sieve_arrays
divisor_convolve = kernels.divisor_convolve
