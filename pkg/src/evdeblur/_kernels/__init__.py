"""Kernel backend selection.

The compiled extension is preferred when present; the pure NumPy
implementation is the fallback. ``EVDEBLUR_BACKEND=pure`` forces the
fallback, ``EVDEBLUR_BACKEND=native`` makes a missing extension an
import error. Both backends produce bit-identical results; see
``benchmarks/bench_kernels.py`` for a speed comparison.
"""

import os

from . import pure

_requested = os.environ.get("EVDEBLUR_BACKEND", "").strip().lower()

if _requested == "pure":
    _impl = pure
    BACKEND = "pure"
elif _requested == "native":
    from . import _native as _impl  # noqa: F401
    BACKEND = "native"
else:
    try:
        from . import _native as _impl
        BACKEND = "native"
    except ImportError:
        _impl = pure
        BACKEND = "pure"

splat_events = _impl.splat_events
simulate_crossings = _impl.simulate_crossings

__all__ = ["BACKEND", "splat_events", "simulate_crossings", "pure"]
