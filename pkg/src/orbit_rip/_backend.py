"""Kernel selection.

The compiled module is used when it imports; ``ORBIT_RIP_PURE=1`` forces
the numpy fallback.
"""
import os

from . import _fallback

try:
    from . import _kernels as _compiled
except ImportError:
    _compiled = None

BACKENDS = {"python": _fallback}
if _compiled is not None:
    BACKENDS["compiled"] = _compiled

if _compiled is not None and os.environ.get("ORBIT_RIP_PURE", "") not in ("1", "true", "yes"):
    DEFAULT = "compiled"
else:
    DEFAULT = "python"


def get_backend(name=None):
    name = DEFAULT if name is None else name
    try:
        return BACKENDS[name]
    except KeyError:
        raise ValueError(f"backend {name!r} not available; have {sorted(BACKENDS)}") from None
