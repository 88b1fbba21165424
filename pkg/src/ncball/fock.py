"""Truncated full Fock space over n generators.

Basis vectors e_w are indexed by words of length <= d in graded order.  The
left creation operator S_i sends e_w to e_{iw}, the right creation operator R_i
sends e_w to e_{wi}; anything that would leave degree d is sent to 0, so every
matrix here is the compression of the untruncated operator.  Creation
operators are stored as scipy.sparse CSR matrices.
"""
from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sp

from . import words
from .errors import CapExceeded, InputError, NotContraction
from .opcore import adjoint, as_tuple, row_norm

DEFAULT_CAP = 5000
DEFAULT_DEGREE = {1: 25, 2: 8, 3: 5}


def default_degree(n):
    return DEFAULT_DEGREE.get(n, 4)


@dataclass(frozen=True, eq=False)
class FockModel:
    n: int
    d: int
    dim: int
    offsets: np.ndarray
    S: list = field(repr=False)
    R: list = field(repr=False)

    @property
    def basis(self):
        return words.enumerate_words(self.n, self.d, cap=self.dim)[0]

    def index(self, w):
        return words.index(w, self.n)

    def level_slice(self, k):
        return slice(int(self.offsets[k]), int(self.offsets[k + 1]))

    def projector(self, k):
        """Diagonal projection onto degrees <= k."""
        diag = np.zeros(self.dim)
        diag[:int(self.offsets[min(k, self.d) + 1])] = 1.0
        return sp.diags(diag).tocsr()

    def monomial(self, w):
        """S_w = S_{w_1} ... S_{w_k} as a sparse partial permutation."""
        return shift_monomial(self.n, self.d, w)

    def memory_estimate(self):
        """Bytes for the sparse S and R matrices and for one dense dim x dim matrix."""
        nnz = 2 * self.n * int(self.offsets[self.d])
        return {"sparse_bytes": nnz * (8 + 4) + 2 * self.n * (self.dim + 1) * 4,
                "dense_bytes": self.dim * self.dim * 16}


def _creation(n, d, offs, i, right):
    src, dst = [], []
    for k in range(d):
        p = np.arange(n**k)
        tgt = p * n + (i - 1) if right else (i - 1) * n**k + p
        src.append(offs[k] + p)
        dst.append(offs[k + 1] + tgt)
    dim = int(offs[d + 1])
    if not src:
        return sp.csr_matrix((dim, dim))
    src = np.concatenate(src)
    dst = np.concatenate(dst)
    return sp.csr_matrix((np.ones(src.size), (dst, src)), shape=(dim, dim))


def build_model(n, d, cap=DEFAULT_CAP):
    if n < 1 or d < 0:
        raise InputError("need n >= 1 and d >= 0")
    dim = words.count_words(n, d)
    if dim > cap:
        raise CapExceeded(f"Fock dimension {dim} exceeds cap {cap}")
    offs = np.array([words.level_offset(n, k) for k in range(d + 2)], dtype=np.int64)
    S = [_creation(n, d, offs, i, right=False) for i in range(1, n + 1)]
    R = [_creation(n, d, offs, i, right=True) for i in range(1, n + 1)]
    return FockModel(n=n, d=d, dim=dim, offsets=offs, S=S, R=R)


def shift_monomial(n, d, w):
    """Sparse S_w on the degree-d truncation: e_v -> e_{wv} when |wv| <= d."""
    w = tuple(w)
    k = len(w)
    dim = words.count_words(n, d)
    if k > d:
        return sp.csr_matrix((dim, dim))
    rw = words.rank(w, n)
    src, dst = [], []
    for j in range(d - k + 1):
        p = np.arange(n**j)
        src.append(words.level_offset(n, j) + p)
        dst.append(words.level_offset(n, k + j) + rw * n**j + p)
    src = np.concatenate(src)
    dst = np.concatenate(dst)
    return sp.csr_matrix((np.ones(src.size), (dst, src)), shape=(dim, dim))


@dataclass(frozen=True)
class PoissonKernel:
    """K_{T,r} as a (dim*h) x h matrix, blocks indexed by words (word-major)."""
    matrix: np.ndarray
    tail_bound: float
    degree: int
    r: float


def poisson_kernel(T, r, model, degree=None):
    """Block w of the kernel is r^|w| D T_w^*, with D = (I - r^2 sum T_i T_i^*)^{1/2}."""
    from .opcore import herm_sqrt

    T = as_tuple(T)
    n, h = T.shape[0], T.shape[1]
    if n != model.n:
        raise InputError("tuple arity differs from the model")
    D = model.d if degree is None else int(degree)
    if D > model.d:
        raise InputError("kernel degree exceeds the model degree")
    t = row_norm(T)
    if r * t > 1.0 + 1e-12:
        raise NotContraction(f"r*||T|| = {r * t:.6g} > 1")
    delta = herm_sqrt(np.eye(h) - r * r * sum(Ti @ adjoint(Ti) for Ti in T))
    Ts = adjoint(T)
    K = np.zeros((model.dim, h, h), dtype=np.complex128)
    level = delta[None]
    K[0] = delta
    for k in range(D):
        # block of iw is r * (block of w) @ T_i^*
        level = (r * np.matmul(level[None], Ts[:, None])).reshape(-1, h, h)
        K[model.level_slice(k + 1)] = level
    q = (r * t) ** 2
    tail = q ** (D + 1) / (1.0 - q) if q < 1 else np.inf
    return PoissonKernel(matrix=K.reshape(model.dim * h, h), tail_bound=float(tail),
                         degree=D, r=float(r))


def poisson_transform(F, kernel, model):
    """K^*(p(S) (x) I_H)K for a polynomial p, summed term by term.

    The term at word w contributes kron(K^*(S_w (x) I)K, A_w), so the result is
    laid out like eval_point(p, r*T).
    """
    K = kernel.matrix
    h = K.shape[1]
    out = np.zeros((h * F.rows, h * F.cols), dtype=np.complex128)
    Kh = adjoint(K)
    Ih = sp.identity(h, format="csr")
    for w, A in F.terms.items():
        SK = sp.kron(model.monomial(w), Ih, format="csr") @ K
        out += np.kron(Kh @ SK, A)
    return out


def reproduction_bound(F, T, r, degree):
    """Bound on ||K^*(p(S) (x) I)K - p(rT)|| for a kernel truncated at degree."""
    t = row_norm(as_tuple(T))
    q = r * t
    total = 0.0
    for w, A in F.terms.items():
        k = len(w)
        if k > degree:
            total += q**k * np.linalg.norm(A, 2)
        else:
            total += np.linalg.norm(A, 2) * q**k * q ** (2 * (degree - k + 1))
    return float(total)
