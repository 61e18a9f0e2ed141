"""Kernel backend selection: the compiled extension when importable, else numpy.

Set ``ACGRAPHS_BACKEND=python`` to force the fallback.
"""
from __future__ import annotations

import os

from . import _pykernels

try:
    from . import _ckernels
except ImportError:  # extension not built
    _ckernels = None

BACKENDS = {"python": _pykernels}
if _ckernels is not None:
    BACKENDS["cython"] = _ckernels


def get_backend(name: str | None = None):
    name = name or os.environ.get("ACGRAPHS_BACKEND")
    if name is None:
        return _ckernels if _ckernels is not None else _pykernels
    try:
        return BACKENDS[name]
    except KeyError:
        raise ValueError(f"backend {name!r} unavailable; have {sorted(BACKENDS)}") from None


def available() -> list[str]:
    return sorted(BACKENDS)
