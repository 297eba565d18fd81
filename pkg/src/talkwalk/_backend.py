"""Kernel backend selection.

The compiled ``_ckernels`` module is used when importable.  Setting
``TALKWALK_BACKEND=python`` forces the pure-Python kernels.
"""

import importlib
import os

BACKENDS = ("cython", "python")


def load(name: str):
    if name == "cython":
        return importlib.import_module("talkwalk._ckernels")
    if name == "python":
        return importlib.import_module("talkwalk._pykernels")
    raise ValueError(f"unknown backend {name!r}; choose from {BACKENDS}")


def available() -> list[str]:
    out = []
    for name in BACKENDS:
        try:
            load(name)
        except ImportError:
            continue
        out.append(name)
    return out


def _select():
    forced = os.environ.get("TALKWALK_BACKEND", "").strip().lower()
    if forced:
        return forced, load(forced)
    try:
        return "cython", load("cython")
    except ImportError:
        return "python", load("python")


NAME, kernels = _select()
