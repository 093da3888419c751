"""Kernel backend selection: compiled extension if importable, numpy otherwise."""
from __future__ import annotations

from . import _pykernels

try:
    from . import _ckernels
except ImportError:  # extension not built
    _ckernels = None

kernels = _ckernels if _ckernels is not None else _pykernels
name = "cython" if _ckernels is not None else "python"


def set_backend(which: str) -> None:
    """Force ``"cython"`` or ``"python"`` kernels for subsequent calls."""
    global kernels, name
    if which == "python":
        kernels, name = _pykernels, "python"
    elif which == "cython":
        if _ckernels is None:
            raise RuntimeError("compiled kernels are not available; rebuild the package")
        kernels, name = _ckernels, "cython"
    else:
        raise ValueError(f"unknown backend {which!r}")


def get_kernels():
    return kernels
