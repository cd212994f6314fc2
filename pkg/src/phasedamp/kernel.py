"""Backend selection for the hot decomposition-search kernels.

The compiled extension (`phasedamp._native`, Cython) is preferred; the numpy
module (`phasedamp._fallback`) implements the same contract and is used when
the extension is missing or when PHASEDAMP_PURE_PYTHON is set.  Both backends
agree to round-off; `benchmarks/bench_kernel.py` compares their speed.
"""

from __future__ import annotations

import os

from phasedamp import _fallback

if os.environ.get("PHASEDAMP_PURE_PYTHON"):
    _impl = _fallback
    BACKEND = "python"
else:
    try:
        from phasedamp import _native as _impl  # type: ignore[no-redef]

        BACKEND = "native"
    except ImportError:
        _impl = _fallback
        BACKEND = "python"


def backend() -> str:
    """Name of the active backend: "native" or "python"."""
    return BACKEND


def use(name: str) -> None:
    """Force a backend ("native" or "python"); for tests and benchmarks."""
    global _impl, BACKEND
    if name == "python":
        _impl, BACKEND = _fallback, "python"
    elif name == "native":
        from phasedamp import _native

        _impl, BACKEND = _native, "native"
    else:
        raise ValueError(f"unknown backend {name!r}")


def avg_ent(amp, theta, k, q):
    return _impl.avg_ent(amp, theta, k, q)


def avg_ent_grad(amp, theta, k, q):
    return _impl.avg_ent_grad(amp, theta, k, q)


def avg_ent_isometry(amp, u):
    return _impl.avg_ent_isometry(amp, u)
