"""Hot per-trial kernels with a compiled core and a pure-Python fallback.

The compiled extension is optional: if the build was skipped or the import
fails for any reason, the numpy transliterations in _fallback take over.
Both backends produce bitwise-identical results; BACKEND says which one is
active and backend_name() is the stable way to query it.
"""

try:
    from ._core import BACKEND, cell_area, count_in_cell, neutral_survivors
except ImportError:
    from ._fallback import BACKEND, cell_area, count_in_cell, neutral_survivors

__all__ = ["BACKEND", "backend_name", "cell_area", "count_in_cell", "neutral_survivors"]


def backend_name() -> str:
    return BACKEND
