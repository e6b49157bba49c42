"""Kernel backend selection for the packed bit-mode simulator.

Two interchangeable implementations of the per-slot kernel exist:

  * ``numba``: explicit loops compiled with ``@njit`` (default when numba
    imports cleanly),
  * ``numpy``: vectorized gather/XOR over the same arrays.

``GRIDNC_BACKEND=numba`` or ``GRIDNC_BACKEND=numpy`` forces one; setting
``NUMBA_DISABLE_JIT=1`` routes to the numpy path as well.  Both produce
bit-identical histories; ``benchmarks/bench_backends.py`` compares their
speed.
"""

from __future__ import annotations

import os

_CHOICES = ("numba", "numpy")


def available() -> tuple[str, ...]:
    """Backends importable in this environment."""
    out = ["numpy"]
    try:
        import numba  # noqa: F401
        out.insert(0, "numba")
    except ImportError:
        pass
    return tuple(out)


def default_backend() -> str:
    forced = os.environ.get("GRIDNC_BACKEND")
    if forced:
        if forced not in _CHOICES:
            raise ValueError(f"GRIDNC_BACKEND must be one of {_CHOICES}, got {forced!r}")
        return forced
    if os.environ.get("NUMBA_DISABLE_JIT") == "1":
        return "numpy"
    return available()[0]


def resolve_backend(name: str | None = None):
    """Return the kernel module for `name` (or the environment default)."""
    name = name or default_backend()
    if name == "numba":
        from . import numba_kernels
        return numba_kernels
    if name == "numpy":
        from . import numpy_kernels
        return numpy_kernels
    raise ValueError(f"unknown backend {name!r}; choose from {_CHOICES}")
