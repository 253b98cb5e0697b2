"""Kernel backend selection.

The compiled extension is preferred when importable; the pure-Python twin is
the fallback and the behavioral reference.  Both implement the identical RNG
protocol documented in _purecore, so swapping backends never changes
results, only speed.  Set MAXENTGAMES_BACKEND=python or =c to force one
(forcing c raises if the extension is missing rather than silently falling
back).
"""

from __future__ import annotations

import os

MODE_IID = 0
MODE_LOGIT = 1
MATCHING_UNIFORM = 0
MATCHING_ROUND_ROBIN = 1

_MASK = (1 << 64) - 1

_requested = os.environ.get("MAXENTGAMES_BACKEND", "").strip().lower()
if _requested not in ("", "c", "python"):
    raise ImportError(
        f"MAXENTGAMES_BACKEND must be 'c' or 'python', got {_requested!r}")

if _requested == "python":
    from . import _purecore as _impl
    BACKEND = "python"
else:
    try:
        from . import _fastcore as _impl  # type: ignore[no-redef]
        BACKEND = "c"
    except ImportError:
        if _requested == "c":
            raise
        from . import _purecore as _impl  # type: ignore[no-redef]
        BACKEND = "python"

simulate_session = _impl.simulate_session


def splitmix64_sequence(seed: int, count: int) -> list[int]:
    """First `count` splitmix64 outputs for `seed`; used to derive per-group
    seeds so an ensemble is reproducible from a single base seed."""
    if count < 0:
        raise ValueError("count must be >= 0")
    state = seed & _MASK
    out = []
    for _ in range(count):
        state = (state + 0x9E3779B97F4A7C15) & _MASK
        z = state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK
        out.append(z ^ (z >> 31))
    return out
