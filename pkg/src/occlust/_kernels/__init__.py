"""Hot kernels: compiled when the extension is built, pure Python otherwise.

Set ``OCCLUST_PURE=1`` to force the fallback.  ``BACKEND`` names the active one.
"""
import os

from . import _fallback

if os.environ.get("OCCLUST_PURE", "") not in ("", "0"):
    _impl = _fallback
    BACKEND = "python"
else:
    try:
        from . import _core as _impl
        BACKEND = "compiled"
    except ImportError:
        _impl = _fallback
        BACKEND = "python"

enumerate_best = _impl.enumerate_best
local_search = _impl.local_search
canonical = _fallback.canonical


def backends():
    """Every importable backend, keyed by name (used by parity tests and benchmarks)."""
    out = {"python": _fallback}
    try:
        from . import _core
        out["compiled"] = _core
    except ImportError:
        pass
    return out
