"""Kernel compilation switch.

Every hot loop in the package is written once as plain Python over numpy
arrays and compiled with numba when available. Setting ``SRQ_NO_JIT=1``
(or running without numba installed) leaves the functions uncompiled, which
is the reference path used by the benchmark and the fallback tests.
"""
import os

try:
    import numba
except ImportError:  # pragma: no cover - numba is a declared dependency
    numba = None

JIT_ENABLED = numba is not None and os.environ.get("SRQ_NO_JIT", "") in ("", "0")


def njit(fn=None, **options):
    if not JIT_ENABLED:
        return fn if fn is not None else (lambda f: f)
    opts = {"cache": True, "nogil": True}
    opts.update(options)
    if fn is None:
        return numba.njit(**opts)
    return numba.njit(**opts)(fn)
