"""Kernel dispatch: the compiled extension when importable, else pure Python.

Set ``PPBASS_PURE=1`` to force the fallback.  ``BACKEND`` names the choice.
"""
import os

from . import _fallback

if os.environ.get("PPBASS_PURE"):
    _impl = _fallback
    BACKEND = "python"
else:
    try:
        from . import _speedups as _impl
        BACKEND = "compiled"
    except ImportError:
        _impl = _fallback
        BACKEND = "python"

span_mask = _impl.span_mask
search = _impl.search
search_batch = _impl.search_batch

IMPLEMENTATIONS = {"python": _fallback}
if BACKEND == "compiled":
    IMPLEMENTATIONS["compiled"] = _impl
