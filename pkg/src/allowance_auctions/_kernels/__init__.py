"""Hot-loop backend, picked at import.

The compiled ``_core`` extension is used when it was built; otherwise the
numpy/pure-Python ``_fallback`` takes over. Set ``ALLOWANCE_AUCTIONS_PURE=1``
to force the fallback.
"""
import os

from . import _fallback

try:
    if os.environ.get("ALLOWANCE_AUCTIONS_PURE"):
        raise ImportError("fallback forced")
    from . import _core as _backend
    BACKEND = "compiled"
except ImportError:
    _backend = _fallback
    BACKEND = "python"

best_slot = _backend.best_slot
sequential_purchase = _backend.sequential_purchase
batch_rank_matching = _backend.batch_rank_matching


def backends():
    """Available backend modules keyed by name (for tests and benchmarks)."""
    out = {"python": _fallback}
    try:
        from . import _core
        out["compiled"] = _core
    except ImportError:
        pass
    return out
