"""Operator Moebius maps: the fractional transform Psi_A and the ball automorphisms.

Row conventions: a tuple X = (X_1..X_n) on C^h is also the row operator
[X_1 ... X_n] : (C^n (x) C^h) -> C^h, block index outermost.  A vector
lam in C^n acts as the row kron(lam, I_h).
"""
from dataclasses import dataclass

import numpy as np

from .errors import InputError, NormExceedsOne, NotStrictContraction, ShapeMismatch
from .opcore import (adjoint, as_matrix, as_tuple, defect_pair, herm_sqrt, invert, op_norm,
                     row, row_norm, split_row)
from .series import FreeSeries, invert_series, mul

STRICT_TOL = 1e-12


def frac_point(A, B, cond_cap=1e8):
    """Psi_A(B) = A - D_{A*}(I - BA*)^{-1} B D_A."""
    A = as_matrix(A)
    B = as_matrix(B)
    if A.shape != B.shape:
        raise ShapeMismatch(f"A is {A.shape}, B is {B.shape}")
    if op_norm(A) >= 1.0:
        raise NotStrictContraction(f"||A|| = {op_norm(A):.6g} is not < 1")
    if op_norm(B) > 1.0 + 1e-10:
        raise NormExceedsOne(f"||B|| = {op_norm(B):.6g} > 1")
    DA, DAs = defect_pair(A)
    K = invert(np.eye(A.shape[0]) - B @ adjoint(A), cond_cap)
    return A - DAs @ K @ B @ DA


def frac_series(A0, F, d_cap):
    """Psi_{A0}[F] = A0 - D_{A0*}(I - F A0*)^{-1} F D_{A0} through d_cap."""
    A0 = as_matrix(A0)
    if F.shape != A0.shape:
        raise ShapeMismatch(f"A0 is {A0.shape}, F has coefficients {F.shape}")
    if op_norm(A0) >= 1.0:
        raise NotStrictContraction(f"||A0|| = {op_norm(A0):.6g} is not < 1")
    DA, DAs = defect_pair(A0)
    g = A0.shape[0]
    inner = FreeSeries.identity(F.n, g) - F.right(adjoint(A0))
    core = mul(invert_series(inner, d_cap), F, d_cap)
    out = FreeSeries.constant(F.n, A0) - core.left(DAs).right(DA)
    return out.truncate(d_cap)


# automorphisms

def _check_lambda(lam, limit=1.0 - 1e-6):
    lam = np.asarray(lam, dtype=np.complex128).reshape(-1)
    if np.linalg.norm(lam) > limit:
        raise NotStrictContraction(f"||lambda|| = {np.linalg.norm(lam):.6g} too close to 1")
    return lam


def _lambda_defects(lam):
    """(Delta_lam scalar, Delta_{lam*} = (I_n - lam^* lam)^{1/2})."""
    nrm2 = float(np.vdot(lam, lam).real)
    Dl = np.sqrt(1.0 - nrm2)
    Dls = herm_sqrt(np.eye(lam.size) - np.outer(np.conj(lam), lam))
    return Dl, Dls


def _check_strict(X):
    X = as_tuple(X)
    if row_norm(X) >= 1.0 - STRICT_TOL:
        raise NotStrictContraction(f"row norm {row_norm(X):.6g} is not < 1")
    return X


def char_fn(lam, X):
    """Theta_lam(X) = -lam + Delta_lam (I - sum conj(lam_i) X_i)^{-1} [X_1..X_n] Delta_{lam*}.

    Returned as the h x nh row.
    """
    lam = _check_lambda(lam)
    X = _check_strict(X)
    n, h = X.shape[0], X.shape[1]
    if lam.size != n:
        raise ShapeMismatch("lambda length differs from the tuple arity")
    Dl, Dls = _lambda_defects(lam)
    res = invert(np.eye(h) - np.tensordot(np.conj(lam), X, axes=1))
    lam_row = np.kron(lam[None, :], np.eye(h))
    return -lam_row + Dl * res @ row(X) @ np.kron(Dls, np.eye(h))


@dataclass(frozen=True, eq=False)
class AutomorphismSpec:
    """Phi = Phi_U o Phi_lam."""
    lam: np.ndarray
    U: np.ndarray

    @classmethod
    def make(cls, lam, U=None):
        lam = _check_lambda(lam)
        n = lam.size
        U = np.eye(n, dtype=np.complex128) if U is None else as_matrix(U)
        if U.shape != (n, n):
            raise ShapeMismatch("U must be n x n")
        if np.linalg.norm(adjoint(U) @ U - np.eye(n)) > 1e-10:
            raise InputError("U is not unitary")
        return cls(lam=lam, U=U)

    def to_json(self):
        from .opcore import matrix_to_json
        return {"lambda": [[float(z.real), float(z.imag)] for z in self.lam],
                "U": matrix_to_json(self.U)}

    @classmethod
    def from_json(cls, obj):
        from .opcore import matrix_from_json
        try:
            lam = [complex(*z) if isinstance(z, (list, tuple)) else complex(z)
                   for z in obj["lambda"]]
        except (KeyError, TypeError, ValueError) as exc:
            raise InputError(f"malformed automorphism JSON: {exc}") from exc
        U = matrix_from_json(obj["U"]) if obj.get("U") is not None else None
        return cls.make(lam, U)


def auto_lambda(lam, X):
    """Phi_lam(X) = -Theta_lam(X) as a tuple."""
    X = as_tuple(X)
    return split_row(-char_fn(lam, X), X.shape[0])


def auto_unitary(U, X):
    """Phi_U(X) = [X_1..X_n] U as a tuple."""
    X = as_tuple(X)
    U = as_matrix(U)
    return np.tensordot(U.T, X, axes=1)


def auto_point(spec, X):
    if not isinstance(spec, AutomorphismSpec):
        spec = AutomorphismSpec.make(spec)
    return auto_unitary(spec.U, auto_lambda(spec.lam, X))


def auto_series(lam, d_cap):
    """Component series of Phi_lam through d_cap (scalar coefficients).

    Phi_lam(X)_j = lam_j - Delta_lam (I - sum conj(lam_i) X_i)^{-1} sum_i X_i (Delta_{lam*})_{ij}.
    """
    lam = _check_lambda(lam)
    n = lam.size
    Dl, Dls = _lambda_defects(lam)
    L = FreeSeries(n, 1, 1, {(i + 1,): np.conj(lam[i]) for i in range(n)})
    res = invert_series(FreeSeries.identity(n, 1) - L, d_cap) if d_cap >= 1 else \
        FreeSeries.identity(n, 1)
    out = []
    for j in range(n):
        lin = FreeSeries(n, 1, 1, {(i + 1,): Dls[i, j] for i in range(n)})
        comp = FreeSeries.constant(n, lam[j]) - mul(res, lin, d_cap).scale(Dl)
        out.append(comp.truncate(d_cap))
    return out


def auto_series_tail(lam, X_norm, d_cap):
    """Geometric bound on the gap between auto_series and auto_point."""
    lam = np.asarray(lam, dtype=np.complex128).reshape(-1)
    a = float(np.linalg.norm(lam))
    Dl, Dls = _lambda_defects(lam)
    return a**d_cap * X_norm ** (d_cap + 1) * Dl * op_norm(Dls) / (1.0 - a * X_norm)
