"""Pseudohyperbolic and hyperbolic distances between strict row contractions.

With R_X = sum_i X_i^* (x) R_i and C_X = (Delta_X (x) I)(I - R_X)^{-1},

    omega(X, Y) = max(||C_X C_Y^{-1}||, ||C_Y C_X^{-1}||),
    delta = ln omega,   d = (omega^2 - 1)/(omega^2 + 1) = tanh delta.

Everything lives on C^h (x) F^2 truncated at a degree D.  All factors are lower
triangular in the degree grading, so the truncated norm is the norm of a
compression and increases with D toward the untruncated value.

C_X C_Y^{-1} is the transfer operator of a linear system running down the word
tree (state x(w.k) = X_k^* x(w) + ...), so its truncated norm is found by a
Riccati-type value recursion over the levels plus bisection on the norm level.
That costs O(D h^3) and makes large D cheap.  The truncated values converge
like 1/D^2, which is why the default degree is large.

A matrix-free Fock-space evaluation (tree sweeps + Lanczos) and a dense one
are kept for cross-checking small degrees.
"""
import threading

import numpy as np
import scipy.sparse as sp
from scipy.sparse.linalg import LinearOperator, eigsh

from . import _kernels, words
from .errors import (CapExceeded, InputError, NotInBall, NotStrictContraction, NumericalError,
                     ShapeMismatch)
from .fock import FockModel, build_model
from .opcore import adjoint, as_tuple, herm_sqrt, invert, op_norm, row_norm

DEFAULT_METRIC_DEGREE = 2048
FOCK_METRIC_DEGREE = {1: 30, 2: 12, 3: 8}
DENSE_LIMIT = 1200
MATRIX_FREE_CAP = 4_000_000
METHODS = ("tree", "fock", "dense")


def default_metric_degree(n, method="tree"):
    if method == "tree":
        return DEFAULT_METRIC_DEGREE
    return FOCK_METRIC_DEGREE.get(n, 6)


def _degree_of(model):
    if isinstance(model, FockModel):
        return model.n, model.d
    return None, int(model)


def _factors(X):
    """Delta_X, Delta_X^{-1} and the sweep matrices for X."""
    X = as_tuple(X)
    h = X.shape[1]
    t = row_norm(X)
    if t >= 1.0:
        raise NotStrictContraction(f"row norm {t:.6g} is not < 1")
    D = herm_sqrt(np.eye(h) - sum(Xi @ adjoint(Xi) for Xi in X))
    Dinv = invert(D, cond_cap=1e12)
    # row layout: (X_i^* v)^T = v^T conj(X_i)
    B = np.ascontiguousarray(np.conj(X))
    Bh = np.ascontiguousarray(np.swapaxes(X, 1, 2))
    return D, Dinv, B, Bh


class MetricWorkspace:
    """Matrix-free C_X C_Y^{-1} on the degree-D truncation.

    Vectors are stored word-major as arrays of shape (words, h).
    """

    def __init__(self, n, degree, cap=MATRIX_FREE_CAP):
        self.n = int(n)
        self.d = int(degree)
        self.words = words.count_words(self.n, self.d)
        if self.words > cap:
            raise CapExceeded(f"{self.words} words exceed the metric cap {cap}")
        self._cache = {}
        self._lock = threading.Lock()

    def factors(self, X):
        key = X.tobytes()
        with self._lock:
            if key not in self._cache:
                self._cache[key] = _factors(X)
            return self._cache[key]

    def ratio_operator(self, X, Y):
        """LinearOperator for M = C_X C_Y^{-1} (and its adjoint)."""
        DX, _, BX, BhX = self.factors(X)
        _, DYi, BY, BhY = self.factors(Y)
        n, d, h = self.n, self.d, X.shape[1]
        N = self.words * h
        DXt, DYit = DX.T, DYi.T

        def mv(x):
            v = np.asarray(x, dtype=np.complex128).reshape(self.words, h) @ DYit
            v = _kernels.raise_apply(v, BY, n, d)
            v = _kernels.raise_solve(v, BX, n, d)
            return (v @ DXt).reshape(-1)

        def rmv(x):
            v = np.asarray(x, dtype=np.complex128).reshape(self.words, h) @ DXt
            v = _kernels.lower_solve(v, BhX, n, d)
            v = _kernels.lower_apply(v, BhY, n, d)
            return (v @ DYit).reshape(-1)

        return LinearOperator((N, N), matvec=mv, rmatvec=rmv, dtype=np.complex128)

    def ratio_norm(self, X, Y, tol=1e-13):
        M = self.ratio_operator(X, Y)
        N = M.shape[0]
        if N <= DENSE_LIMIT:
            dense = M.matmat(np.eye(N, dtype=np.complex128))
            return op_norm(dense)
        G = LinearOperator((N, N), matvec=lambda x: M.rmatvec(M.matvec(x)), dtype=np.complex128)
        # fixed start vector keeps the result reproducible
        v0 = np.linspace(1.0, 2.0, N).astype(np.complex128)
        val = eigsh(G, k=1, which="LA", tol=tol, v0=v0, return_eigenvectors=False)
        return float(np.sqrt(max(val[0].real, 0.0)))


def cx(X, model):
    """Dense C_X on C^h (x) F^2 (operator factor outermost)."""
    X = as_tuple(X)
    if not isinstance(model, FockModel):
        raise InputError("cx needs a FockModel")
    if X.shape[0] != model.n:
        raise ShapeMismatch("tuple arity differs from the model")
    D, _, _, _ = _factors(X)
    RX = sum(sp.kron(sp.csr_matrix(adjoint(Xi)), model.R[i]) for i, Xi in enumerate(X))
    RX = sp.csr_matrix(RX)
    # (I - R_X)^{-1} is the finite Neumann sum since R_X^{d+1} = 0
    N = RX.shape[0]
    acc = np.eye(N, dtype=np.complex128)
    term = np.eye(N, dtype=np.complex128)
    for _ in range(model.d):
        term = RX @ term
        acc += term
    return np.kron(D, np.eye(model.dim)) @ acc


def cx_inverse(X, model):
    """C_X^{-1} = (I - R_X)(Delta_X^{-1} (x) I)."""
    X = as_tuple(X)
    _, Dinv, _, _ = _factors(X)
    RX = sum(sp.kron(sp.csr_matrix(adjoint(Xi)), model.R[i]) for i, Xi in enumerate(X))
    N = model.dim * X.shape[1]
    return (np.eye(N) - sp.csr_matrix(RX).toarray()) @ np.kron(Dinv, np.eye(model.dim))


def tree_realization(X, Y):
    """(A, B, C, D) with C_X C_Y^{-1} = D + sum over words of C A_w B_k ... on the tree.

    x(w.k) = A_k x(w) + B_k u(w),  y(w) = C x(w) + D u(w),  x(root) = 0,
    with A_k = X_k^*, B_k = (X_k^* - Y_k^*) Delta_Y^{-1}, C = Delta_X,
    D = Delta_X Delta_Y^{-1}.
    """
    DX, _, _, _ = _factors(X)
    _, DYi, _, _ = _factors(Y)
    A = np.ascontiguousarray(np.conj(np.swapaxes(X, 1, 2)))
    B = np.ascontiguousarray((A - np.conj(np.swapaxes(Y, 1, 2))) @ DYi)
    return A, B, DX, DX @ DYi


def tree_norm(X, Y, degree, rtol=1e-13):
    """||C_X C_Y^{-1}|| on the degree-D truncation by bisection on the value recursion."""
    A, B, C, D = tree_realization(as_tuple(X), as_tuple(Y))
    depth = int(degree)
    lo = op_norm(D)

    def feasible(g):
        return _kernels.riccati_depth(A, B, C, D, g * g, depth) > depth

    hi = max(lo, 1e-300) * (1.0 + 1e-3)
    while not feasible(hi):
        lo = hi
        hi *= 2.0
        if hi > 1e12:
            raise NumericalError("metric norm bracket diverged")
    while hi - lo > rtol * hi:
        mid = 0.5 * (lo + hi)
        if feasible(mid):
            hi = mid
        else:
            lo = mid
    return hi


def omega_delta_d(X, Y, model=None, workspace=None, method="tree"):
    """(omega, delta, d) at the truncation given by a FockModel or a degree.

    method "tree" (default) uses the level recursion; "fock" the matrix-free
    Fock evaluation; "dense" explicit matrices.  All three compute the same
    compression norm.
    """
    X = as_tuple(X)
    Y = as_tuple(Y)
    if X.shape != Y.shape:
        raise ShapeMismatch(f"{X.shape} vs {Y.shape}")
    if method not in METHODS:
        raise InputError(f"unknown metric method {method!r}")
    n = X.shape[0]
    mn, D = _degree_of(model if model is not None else default_metric_degree(n, method))
    if mn is not None and mn != n:
        raise ShapeMismatch("tuple arity differs from the model")
    if D < 0:
        raise InputError("degree must be >= 0")
    _factors(X)
    _factors(Y)
    if np.array_equal(X, Y):
        omega = 1.0
    elif method == "tree":
        omega = max(tree_norm(X, Y, D), tree_norm(Y, X, D), 1.0)
    elif method == "fock":
        ws = workspace if workspace is not None else MetricWorkspace(n, D)
        omega = max(ws.ratio_norm(X, Y), ws.ratio_norm(Y, X), 1.0)
    else:
        fm = model if isinstance(model, FockModel) else build_model(n, D)
        omega = dense_omega(X, Y, fm)
    delta = float(np.log(omega))
    w2 = omega * omega
    return omega, delta, (w2 - 1.0) / (w2 + 1.0)


def convergence_ladder(X, Y, degrees, method="tree"):
    """[(degree, omega, delta, d)] for each truncation degree."""
    return [(int(D),) + omega_delta_d(X, Y, int(D), method=method) for D in degrees]


def extrapolated_omega(X, Y, degree=DEFAULT_METRIC_DEGREE):
    """Richardson estimate of the untruncated omega from degrees D/2 and D.

    Uses the observed O(1/D^2) convergence; a diagnostic, not a bound.
    """
    half = omega_delta_d(X, Y, max(int(degree) // 2, 1))[0]
    full = omega_delta_d(X, Y, int(degree))[0]
    return full + (full - half) / 3.0


def ball_d(z, w):
    """||Phi_z(w)||_2 for points of the Euclidean unit ball of C^n."""
    from .transforms import auto_lambda

    z = np.asarray(z, dtype=np.complex128).reshape(-1)
    w = np.asarray(w, dtype=np.complex128).reshape(-1)
    if z.shape != w.shape:
        raise ShapeMismatch("points must live in the same C^n")
    if np.linalg.norm(z) >= 1.0 or np.linalg.norm(w) >= 1.0:
        raise NotInBall("points must satisfy ||z|| < 1")
    if np.array_equal(z, w):
        return 0.0
    return float(np.linalg.norm(auto_lambda(z, w.reshape(-1, 1, 1)).reshape(-1)))


def disc_distance(z, w):
    """|z - w| / |1 - conj(z) w| on the unit disc."""
    return abs(z - w) / abs(1.0 - np.conj(z) * w)


def dense_omega(X, Y, model):
    """omega from explicit dense C_X and C_Y^{-1}; for cross-checking small cases."""
    if model.dim * as_tuple(X).shape[1] > 3000:
        raise CapExceeded("dense metric limited to 3000 rows")
    a = op_norm(cx(X, model) @ cx_inverse(Y, model))
    b = op_norm(cx(Y, model) @ cx_inverse(X, model))
    return max(a, b, 1.0)
