"""Select the simplex kernel implementation at import time.

The compiled extension is used when it is importable. Setting
``FLPKIT_BACKEND=python`` forces the numpy fallback.
"""
from __future__ import annotations

import os
from types import ModuleType

from . import _kernels_py

_compiled: ModuleType | None
try:
    from . import _kernels as _compiled  # type: ignore[attr-defined]
except ImportError:
    _compiled = None

BACKENDS: dict[str, ModuleType] = {"python": _kernels_py}
if _compiled is not None:
    BACKENDS["compiled"] = _compiled

if os.environ.get("FLPKIT_BACKEND", "").lower() == "python" or _compiled is None:
    DEFAULT = "python"
else:
    DEFAULT = "compiled"


def get_kernels(name: str | None = None) -> ModuleType:
    name = DEFAULT if name is None else name
    try:
        return BACKENDS[name]
    except KeyError:
        raise ValueError(
            f"backend {name!r} unavailable; have {sorted(BACKENDS)}"
        ) from None


def backend_name() -> str:
    return DEFAULT
