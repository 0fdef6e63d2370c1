"""Kernel backend selection.

The compiled ``_speedups`` extension is used when it has been built;
otherwise the pure-Python ``_pykernels`` are used. Setting
``MODESHIFT_PURE_PYTHON=1`` forces the fallback.
"""

from __future__ import annotations

import os

from . import _pykernels

BACKENDS = {"python": _pykernels}

try:
    from . import _speedups
except ImportError:  # extension not built
    _speedups = None
else:
    BACKENDS["cython"] = _speedups

if _speedups is not None and os.environ.get("MODESHIFT_PURE_PYTHON", "") in ("", "0"):
    BACKEND = "cython"
else:
    BACKEND = "python"

_active = BACKENDS[BACKEND]
decode_track = _active.decode_track
pitch_class_mask = _active.pitch_class_mask
candidate_masks = _active.candidate_masks
