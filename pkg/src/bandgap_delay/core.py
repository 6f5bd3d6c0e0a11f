"""Kernel backend selection.

The hot 2x2 cascade exists twice: a Cython extension (built at install
time) and a pure-NumPy fallback with identical semantics.  The compiled
kernel is preferred when importable; set BANDGAP_DELAY_BACKEND=python or
=compiled to force a choice (forcing a missing compiled kernel raises).
"""

from __future__ import annotations

import os

from . import _core_py

POL_S = _core_py.POL_S
POL_P = _core_py.POL_P

_requested = os.environ.get("BANDGAP_DELAY_BACKEND", "auto").strip().lower()

if _requested in ("python", "py"):
    _impl = _core_py
    BACKEND = "python"
elif _requested in ("auto", "", "compiled", "c", "cython"):
    try:
        from . import _core_cy as _impl  # type: ignore[attr-defined]

        BACKEND = "compiled"
    except ImportError:
        if _requested in ("compiled", "c", "cython"):
            raise ImportError(
                "BANDGAP_DELAY_BACKEND requested the compiled kernel but "
                "bandgap_delay._core_cy is not importable; reinstall with a "
                "C compiler or set BANDGAP_DELAY_BACKEND=python"
            )
        _impl = _core_py
        BACKEND = "python"
else:
    raise ValueError(f"BANDGAP_DELAY_BACKEND={_requested!r} not understood (use 'auto', 'compiled' or 'python')")

amplitudes = _impl.amplitudes
half_trace = _impl.half_trace
