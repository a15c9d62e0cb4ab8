"""Backend selection for the hot loops.

The compiled extension is used when it has been built; otherwise the
pure-Python module is imported. Setting ``CACTUS_SPLIT_PURE=1`` forces the
Python backend (used by the benchmark and the backend-equivalence tests).
"""

from __future__ import annotations

import os

from . import _kernels_py

if os.environ.get("CACTUS_SPLIT_PURE", "") not in ("", "0"):
    _impl = _kernels_py
else:
    try:
        from . import _kernels as _impl  # type: ignore[attr-defined]
    except ImportError:  # extension not built
        _impl = _kernels_py

BACKEND: str = _impl.BACKEND
convolve = _impl.convolve
dot = _impl.dot
cactus_census = _impl.cactus_census


def backends() -> dict[str, object]:
    """All importable backends keyed by name (always includes ``python``)."""
    found: dict[str, object] = {"python": _kernels_py}
    try:
        from . import _kernels  # type: ignore[attr-defined]

        found["cython"] = _kernels
    except ImportError:
        pass
    return found
