"""Backend selection for the numeric kernels.

The compiled extension is used when it was built; otherwise, or when the
environment variable ``TANGENTCONE_PURE`` is set to a non-empty value other
than ``0``, the NumPy fallback is used.
"""
from __future__ import annotations

import os

from . import _kernels_py

_force_pure = os.environ.get("TANGENTCONE_PURE", "") not in ("", "0")

if _force_pure:
    _impl = _kernels_py
else:
    try:
        from . import _kernels as _impl  # type: ignore[attr-defined]
    except ImportError:  # extension not built
        _impl = _kernels_py

BACKEND: str = _impl.BACKEND
eval_packed = _impl.eval_packed
eval_grad_packed = _impl.eval_grad_packed
newton_packed = _impl.newton_packed


def backends() -> dict:
    """All importable backends by name (used by tests and the benchmark)."""
    out = {"python": _kernels_py}
    try:
        from . import _kernels  # type: ignore[attr-defined]

        out["cython"] = _kernels
    except ImportError:
        pass
    return out
