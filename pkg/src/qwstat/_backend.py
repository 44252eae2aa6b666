"""Select the evolution kernel at import time.

The compiled ``_ckernel`` extension is used when it was built; otherwise the
numpy implementation in ``_pykernel``.  Setting ``QWSTAT_PURE_PYTHON=1``
forces the fallback.
"""

from __future__ import annotations

import os

from . import _pykernel

if os.environ.get("QWSTAT_PURE_PYTHON", "") not in ("", "0"):
    _impl = _pykernel
    BACKEND = "python"
else:
    try:
        from . import _ckernel as _impl  # type: ignore[attr-defined]
        BACKEND = "cython"
    except ImportError:
        _impl = _pykernel
        BACKEND = "python"

evolve_window = _impl.evolve_window
measure_series = _impl.measure_series
