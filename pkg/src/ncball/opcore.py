"""Dense complex matrix primitives.

Operator tuples are arrays of shape (n, h, h).  All spectral work goes through
numpy's LAPACK bindings (eigh for Hermitian problems, svd for singular values).
"""
import numpy as np

from .errors import (IllConditioned, InputError, NegativeSpectrum, NormExceedsOne,
                     NotHermitian, ShapeMismatch, Singular)

KERNEL_TOL = 1e-10
COND_CAP = 1e8


def as_matrix(M):
    M = np.asarray(M, dtype=np.complex128)
    if M.ndim == 0:
        M = M.reshape(1, 1)
    if M.ndim != 2:
        raise ShapeMismatch(f"expected a matrix, got shape {M.shape}")
    return M


def as_tuple(X):
    X = np.asarray(X, dtype=np.complex128)
    if X.ndim == 1:
        X = X.reshape(-1, 1, 1)
    if X.ndim != 3 or X.shape[1] != X.shape[2]:
        raise ShapeMismatch(f"expected an (n, h, h) tuple, got shape {X.shape}")
    return X


def adjoint(M):
    return np.conj(np.swapaxes(M, -1, -2))


def hermitian_part(M):
    return 0.5 * (M + adjoint(M))


def op_norm(M):
    M = as_matrix(M)
    if M.size == 0:
        return 0.0
    return float(np.linalg.norm(M, 2))


def _check_hermitian(M, tol):
    scale = max(1.0, np.linalg.norm(M))
    if np.linalg.norm(M - adjoint(M)) > tol * scale:
        raise NotHermitian("matrix is not Hermitian within tolerance")


def herm_sqrt(M, tol=None):
    """Positive square root of a Hermitian PSD matrix.

    Eigenvalues in [-tol, 0) are clamped to zero; tol defaults to
    KERNEL_TOL * max(1, ||M||).
    """
    M = as_matrix(M)
    _check_hermitian(M, 1e3 * KERNEL_TOL)
    w, V = np.linalg.eigh(hermitian_part(M))
    if tol is None:
        tol = KERNEL_TOL * max(1.0, float(np.max(np.abs(w), initial=0.0)))
    if w.size and w.min() < -tol:
        raise NegativeSpectrum(f"min eigenvalue {w.min():.3e} below -{tol:.1e}")
    w = np.sqrt(np.clip(w, 0.0, None))
    return (V * w) @ adjoint(V)


def defect_pair(A, tol=KERNEL_TOL):
    """(D_A, D_{A*}) = ((I - A*A)^{1/2}, (I - AA*)^{1/2})."""
    A = as_matrix(A)
    if op_norm(A) > 1.0 + tol:
        raise NormExceedsOne(f"||A|| = {op_norm(A):.6g} > 1")
    r, c = A.shape
    DA = herm_sqrt(np.eye(c) - adjoint(A) @ A)
    DAs = herm_sqrt(np.eye(r) - A @ adjoint(A))
    return DA, DAs


def norm_extents(M):
    """(largest, smallest) singular value.

    The smallest value is inf ||Mx|| over unit x, so it is 0 for wide matrices.
    """
    M = as_matrix(M)
    s = np.linalg.svd(M, compute_uv=False)
    smin = float(s.min()) if M.shape[1] <= M.shape[0] else 0.0
    return float(s.max()), smin


def psd_margin(M, herm_tol=1e-8):
    """Smallest eigenvalue of the Hermitian part of M."""
    M = as_matrix(M)
    _check_hermitian(M, herm_tol)
    return float(np.linalg.eigvalsh(hermitian_part(M))[0])


def strict_order(A, B, gap):
    """True iff B - A is positive with spectrum bounded below by gap."""
    A = as_matrix(A)
    B = as_matrix(B)
    if A.shape != B.shape:
        raise ShapeMismatch(f"{A.shape} vs {B.shape}")
    return psd_margin(B - A) >= gap


def invert(M, cond_cap=COND_CAP):
    M = as_matrix(M)
    if M.shape[0] != M.shape[1]:
        raise ShapeMismatch("only square matrices are invertible")
    s = np.linalg.svd(M, compute_uv=False)
    if not np.all(np.isfinite(s)) or s.min() == 0.0:
        raise Singular("matrix is singular")
    cond = s.max() / s.min()
    if cond > cond_cap:
        raise IllConditioned(f"condition {cond:.3e} exceeds cap {cond_cap:.1e}")
    return np.linalg.solve(M, np.eye(M.shape[0], dtype=np.complex128))


def row(X):
    """The row operator [X_1, ..., X_n] : H^n -> H."""
    X = as_tuple(X)
    return np.concatenate(list(X), axis=1)


def split_row(M, n):
    """Inverse of row: cut an h x nh matrix into n square blocks."""
    M = as_matrix(M)
    h = M.shape[0]
    if M.shape[1] != n * h:
        raise ShapeMismatch(f"row of shape {M.shape} is not {n} blocks of size {h}")
    return np.stack([M[:, i * h:(i + 1) * h] for i in range(n)])


def row_norm(X):
    """||X_1 X_1* + ... + X_n X_n*||^{1/2}."""
    return op_norm(row(X))


def scalar_tuple(z, h=1):
    """The tuple (z_1 I_h, ..., z_n I_h)."""
    z = np.asarray(z, dtype=np.complex128).reshape(-1)
    return z[:, None, None] * np.eye(h)[None]


# JSON

def matrix_to_json(M):
    M = as_matrix(M)
    return {"rows": int(M.shape[0]), "cols": int(M.shape[1]),
            "re": [float(x) for x in M.real.ravel()],
            "im": [float(x) for x in M.imag.ravel()]}


def matrix_from_json(obj):
    try:
        r, c = int(obj["rows"]), int(obj["cols"])
        re = np.asarray(obj["re"], dtype=float)
        im = np.asarray(obj.get("im", [0.0] * (r * c)), dtype=float)
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"malformed matrix JSON: {exc}") from exc
    if re.size != r * c or im.size != r * c:
        raise InputError("matrix JSON entry count does not match rows*cols")
    return (re + 1j * im).reshape(r, c)


def tuple_to_json(X):
    X = as_tuple(X)
    return {"n": int(X.shape[0]), "blocks": [matrix_to_json(B) for B in X]}


def tuple_from_json(obj):
    blocks = obj.get("blocks") if isinstance(obj, dict) else obj
    if not isinstance(blocks, list) or not blocks:
        raise InputError("tuple JSON needs a non-empty list of matrices")
    mats = [matrix_from_json(b) for b in blocks]
    if len({m.shape for m in mats}) != 1 or mats[0].shape[0] != mats[0].shape[1]:
        raise InputError("tuple blocks must be square and of equal size")
    if isinstance(obj, dict) and "n" in obj and int(obj["n"]) != len(mats):
        raise InputError("tuple JSON n does not match the number of blocks")
    return np.stack(mats)
