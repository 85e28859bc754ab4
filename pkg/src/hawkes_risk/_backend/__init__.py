"""Sampling-kernel backend selection.

The compiled extension is preferred when present; the pure-Python module is
a drop-in replacement producing bit-identical output.  Set the environment
variable HAWKES_RISK_BACKEND to "python" or "compiled" to force a choice at
import time.
"""

from __future__ import annotations

import os

from . import _core_py
from ._core_py import EventCapExceeded

_requested = os.environ.get("HAWKES_RISK_BACKEND", "").strip().lower()

if _requested in ("", "compiled", "c"):
    try:
        from . import _core as core
    except ImportError:
        if _requested:
            raise ImportError(
                "HAWKES_RISK_BACKEND requested the compiled backend but the "
                "extension is not built"
            ) from None
        core = _core_py
elif _requested in ("python", "py"):
    core = _core_py
else:
    raise ImportError(f"unknown HAWKES_RISK_BACKEND={_requested!r}")


def backend_name() -> str:
    """Name of the backend selected at import: 'compiled' or 'python'."""
    return "compiled" if core.COMPILED else "python"


def available_backends() -> dict:
    """All importable backend modules, keyed by name."""
    out = {"python": _core_py}
    try:
        from . import _core
        out["compiled"] = _core
    except ImportError:
        pass
    return out
