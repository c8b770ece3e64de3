"""Kernel selection: compiled extension when importable, pure Python otherwise.

Set ``BETACYL_PURE=1`` to force the fallback (used by the benchmark and by
the cross-implementation tests).
"""

import os

from . import _pykernels

BACKEND = "python"
_impl = _pykernels

if os.environ.get("BETACYL_PURE", "") not in ("1", "true", "yes"):
    try:
        from . import _ckernels as _impl  # type: ignore[no-redef]

        BACKEND = "cython"
    except ImportError:  # pragma: no cover - depends on build
        _impl = _pykernels

z_function = _impl.z_function
prefix_function = _impl.prefix_function
is_self_admissible = _impl.is_self_admissible
shifts_dominated = _impl.shifts_dominated
recurrence_times = _impl.recurrence_times
first_nonzero_from = _impl.first_nonzero_from

__all__ = [
    "BACKEND",
    "z_function",
    "prefix_function",
    "is_self_admissible",
    "shifts_dominated",
    "recurrence_times",
    "first_nonzero_from",
]
