"""Kernel backend dispatch.

IODEEP_KERNELS=numpy forces the pure-numpy path; IODEEP_KERNELS=numba
demands the JIT path (ImportError if numba is missing). Unset, the JIT
path is used when numba imports, numpy otherwise.
"""

from __future__ import annotations

import os

from . import kernels_numpy

_BACKENDS = {"numpy": kernels_numpy}

try:
    from . import kernels_numba
    _BACKENDS["numba"] = kernels_numba
except ImportError:
    kernels_numba = None

_KERNEL_NAMES = (
    "conv2d",
    "transposed_conv2d",
    "max_pool2d",
    "bilinear_resize",
    "label_components",
)


def _default_backend() -> str:
    requested = os.environ.get("IODEEP_KERNELS", "").strip().lower()
    if requested:
        if requested not in ("numpy", "numba"):
            raise ValueError(f"IODEEP_KERNELS must be 'numpy' or 'numba', got {requested!r}")
        if requested == "numba" and "numba" not in _BACKENDS:
            raise ImportError("IODEEP_KERNELS=numba but numba is not installed")
        return requested
    return "numba" if "numba" in _BACKENDS else "numpy"


_active = _default_backend()


def active_backend() -> str:
    return _active


def set_backend(name: str) -> None:
    """Switch kernel implementations at runtime (tests, benchmarks)."""
    global _active
    if name not in _BACKENDS:
        raise ValueError(f"unknown kernel backend {name!r}")
    _active = name


def available_backends() -> tuple[str, ...]:
    return tuple(sorted(_BACKENDS))


def __getattr__(name):
    if name in _KERNEL_NAMES:
        return getattr(_BACKENDS[_active], name)
    raise AttributeError(name)
