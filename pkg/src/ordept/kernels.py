"""Scan-kernel backend selection: compiled extension if built, else pure Python.

Set ORDEPT_PURE_PY=1 to force the fallback; tests and the benchmark switch
explicitly via use().
"""

import os

from . import _scan_py

_BACKENDS = {"python": _scan_py}
try:
    from . import _scan_cy  # compiled at install time; optional

    _BACKENDS["compiled"] = _scan_cy
except ImportError:
    _scan_cy = None

_active = _scan_py if os.environ.get("ORDEPT_PURE_PY") else _BACKENDS.get("compiled", _scan_py)


def available():
    return sorted(_BACKENDS)


def active_name():
    return _active.BACKEND


def use(name):
    """Switch backend ('python' or 'compiled'); returns the previous name."""
    global _active
    if name not in _BACKENDS:
        raise ValueError(f"backend {name!r} not available (have {available()})")
    prev = _active.BACKEND
    _active = _BACKENDS[name]
    return prev


def ordept_scan(*args):
    return _active.ordept_scan(*args)


def orbgrand_scan(*args):
    return _active.orbgrand_scan(*args)


def ordeptx_scan(*args):
    return _active.ordeptx_scan(*args)
