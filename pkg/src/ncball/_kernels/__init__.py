"""Backend selection for the word-indexed kernels.

The compiled extension is used when it imports; otherwise the numpy
implementation.  Set NCBALL_PURE_PYTHON=1 to force the fallback.
"""
import os

from . import _pykernels as python_backend

compiled_backend = None
if os.environ.get("NCBALL_PURE_PYTHON") != "1":
    try:
        from . import _ckernels as compiled_backend
    except ImportError:
        compiled_backend = None

_active = compiled_backend if compiled_backend is not None else python_backend
BACKEND = "compiled" if compiled_backend is not None else "python"

level_offsets = python_backend.level_offsets


def free_convolve(A, B, n, d):
    return _active.free_convolve(A, B, n, d)


def free_inverse(A, A0inv, n, d):
    return _active.free_inverse(A, A0inv, n, d)


def raise_solve(v, B, n, d):
    return _active.raise_solve(v, B, n, d)


def raise_apply(v, B, n, d):
    return _active.raise_apply(v, B, n, d)


def lower_solve(v, Bh, n, d):
    return _active.lower_solve(v, Bh, n, d)


def lower_apply(v, Bh, n, d):
    return _active.lower_apply(v, Bh, n, d)


def backends():
    """Available backends by name, compiled first when present."""
    out = {}
    if compiled_backend is not None:
        out["compiled"] = compiled_backend
    out["python"] = python_backend
    return out


def riccati_depth(A, B, C, D, g2, depth, conv_tol=1e-15):
    return _active.riccati_depth(A, B, C, D, g2, depth, conv_tol)
