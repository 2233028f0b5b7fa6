"""Kernel backend selection.

The compiled extension is used when importable; set the environment variable
``PURE_LABOUR_PURE_PYTHON=1`` to force the Python implementation.
"""

from __future__ import annotations

import os

from . import _pykernels

BACKEND = "python"
power_iterate = _pykernels.power_iterate
run_ledger = _pykernels.run_ledger

if not os.environ.get("PURE_LABOUR_PURE_PYTHON"):
    try:
        from . import _ckernels
    except ImportError:  # extension not built
        _ckernels = None
    else:
        BACKEND = "cython"
        power_iterate = _ckernels.power_iterate
        run_ledger = _ckernels.run_ledger
else:
    _ckernels = None


def backends() -> dict:
    """Available implementations keyed by name, compiled first when present."""
    out = {}
    if _ckernels is not None:
        out["cython"] = _ckernels
    out["python"] = _pykernels
    return out
