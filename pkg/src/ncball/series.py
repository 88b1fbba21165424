"""Free power series with matrix coefficients.

A FreeSeries over n letters is a finitely supported map word -> coefficient
matrix (rows x cols).  Evaluation at an operator tuple X on C^h is

    F(X) = sum_w  kron(X_w, A_w),     X_w = X_{w_1} ... X_{w_k},

so the value acts on C^h (x) C^cols with the operator factor outermost.
Infinite series only enter through constructions cut at a degree cap d_cap;
such results carry ``truncated=True``.
"""
import warnings

import numpy as np
import scipy.sparse as sp

from . import _kernels, words
from .errors import (ArityMismatch, CapExceeded, DegreeExceeded, InputError,
                     LowDegreeTermsPresent, NotIsometry, NumericalError, ShapeMismatch,
                     SingularConstantTerm)
from .opcore import adjoint, as_matrix, as_tuple, invert, matrix_from_json, matrix_to_json, \
    norm_extents, op_norm

DENSE_WORD_CAP = 2_000_000
_DENSE_PAIR_THRESHOLD = 2000


class FreeSeries:
    """Finitely supported word -> matrix map.  Treat instances as immutable."""

    __slots__ = ("n", "rows", "cols", "terms", "declared_sup_norm", "provenance", "truncated")

    def __init__(self, n, rows, cols, terms=None, declared_sup_norm=None, provenance=None,
                 truncated=False):
        if n < 1 or rows < 1 or cols < 1:
            raise InputError("series needs n, rows, cols >= 1")
        self.n, self.rows, self.cols = int(n), int(rows), int(cols)
        clean = {}
        for w, A in (terms or {}).items():
            w = words.validate(w, self.n)
            A = np.asarray(A, dtype=np.complex128)
            if A.ndim < 2:
                A = A.reshape(self.rows, self.cols)
            if A.shape != (self.rows, self.cols):
                raise ShapeMismatch(f"coefficient at {w} has shape {A.shape}, "
                                    f"expected {(self.rows, self.cols)}")
            if np.any(A != 0):
                clean[w] = A
        self.terms = dict(sorted(clean.items(), key=lambda kv: (len(kv[0]), kv[0])))
        self.declared_sup_norm = declared_sup_norm
        self.provenance = provenance
        self.truncated = bool(truncated)

    # construction

    @classmethod
    def zero(cls, n, rows=1, cols=1):
        return cls(n, rows, cols)

    @classmethod
    def constant(cls, n, A):
        A = as_matrix(A)
        return cls(n, A.shape[0], A.shape[1], {(): A})

    @classmethod
    def identity(cls, n, k=1):
        return cls(n, k, k, {(): np.eye(k)}, declared_sup_norm=1.0, provenance="exact")

    @classmethod
    def monomial(cls, n, w, A=1.0):
        A = as_matrix(A)
        return cls(n, A.shape[0], A.shape[1], {tuple(w): A})

    @classmethod
    def from_dense(cls, n, arr, truncated=False):
        """Inverse of to_dense: arr has one coefficient per word in graded order."""
        d = 0
        while words.count_words(n, d) < arr.shape[0]:
            d += 1
        if words.count_words(n, d) != arr.shape[0]:
            raise ShapeMismatch("dense array length is not a full graded basis")
        offs = np.array([words.level_offset(n, k) for k in range(d + 2)])
        nz = np.flatnonzero(np.any(arr != 0, axis=(1, 2)))
        levels = np.searchsorted(offs, nz, side="right") - 1
        terms = {}
        for i, k in zip(nz, levels):
            terms[words.unrank(int(i - offs[k]), int(k), n)] = arr[i]
        return cls(n, arr.shape[1], arr.shape[2], terms, truncated=truncated)

    # inspection

    @property
    def shape(self):
        return self.rows, self.cols

    @property
    def degree(self):
        return max((len(w) for w in self.terms), default=0)

    def coeff(self, w):
        A = self.terms.get(tuple(w))
        return A.copy() if A is not None else np.zeros((self.rows, self.cols), np.complex128)

    def constant_term(self):
        return self.coeff(())

    def homogeneous(self, k):
        return self._like({w: A for w, A in self.terms.items() if len(w) == k})

    def degree_norms(self):
        """k -> ||sum_{|w|=k} A_w^* A_w||^{1/2} over supported degrees."""
        out = {}
        for w, A in self.terms.items():
            out.setdefault(len(w), np.zeros((self.cols, self.cols), np.complex128))
            out[len(w)] += adjoint(A) @ A
        return {k: float(np.sqrt(max(np.linalg.eigvalsh(M)[-1], 0.0))) for k, M in out.items()}

    def to_dense(self, d):
        N = words.count_words(self.n, d)
        if N > DENSE_WORD_CAP:
            raise CapExceeded(f"{N} words exceed the dense cap")
        arr = np.zeros((N, self.rows, self.cols), dtype=np.complex128)
        for w, A in self.terms.items():
            if len(w) <= d:
                arr[words.index(w, self.n)] = A
        return arr

    def max_diff(self, other, d=None):
        """Largest coefficient difference (spectral norm) through degree d."""
        keys = set(self.terms) | set(other.terms)
        if d is not None:
            keys = {w for w in keys if len(w) <= d}
        return max((op_norm(self.coeff(w) - other.coeff(w)) for w in keys), default=0.0)

    # algebra

    def _like(self, terms, truncated=None):
        return FreeSeries(self.n, self.rows, self.cols, terms,
                          truncated=self.truncated if truncated is None else truncated)

    def _check_same(self, other):
        if self.n != other.n:
            raise ArityMismatch(f"{self.n} vs {other.n} letters")
        if self.shape != other.shape:
            raise ShapeMismatch(f"{self.shape} vs {other.shape}")

    def __add__(self, other):
        self._check_same(other)
        terms = dict(self.terms)
        for w, A in other.terms.items():
            terms[w] = terms[w] + A if w in terms else A
        return self._like(terms, self.truncated or other.truncated)

    def __neg__(self):
        return self._like({w: -A for w, A in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c):
        return self._like({w: c * A for w, A in self.terms.items()})

    def left(self, M):
        """Coefficientwise M @ A_w."""
        M = as_matrix(M)
        terms = {w: M @ A for w, A in self.terms.items()}
        return FreeSeries(self.n, M.shape[0], self.cols, terms, truncated=self.truncated)

    def right(self, M):
        """Coefficientwise A_w @ M."""
        M = as_matrix(M)
        terms = {w: A @ M for w, A in self.terms.items()}
        return FreeSeries(self.n, self.rows, M.shape[1], terms, truncated=self.truncated)

    def columns(self, start, stop):
        terms = {w: A[:, start:stop] for w, A in self.terms.items()}
        return FreeSeries(self.n, self.rows, stop - start, terms, truncated=self.truncated)

    def truncate(self, d):
        kept = {w: A for w, A in self.terms.items() if len(w) <= d}
        return self._like(kept, self.truncated or len(kept) < len(self.terms))

    def with_norm(self, value, provenance):
        out = self._like(self.terms)
        out.declared_sup_norm = None if value is None else float(value)
        out.provenance = provenance
        return out

    def __repr__(self):
        return (f"FreeSeries(n={self.n}, shape={self.shape}, terms={len(self.terms)}, "
                f"degree={self.degree}, truncated={self.truncated})")

    # serialization

    def to_json(self):
        out = {"n": self.n, "rows": self.rows, "cols": self.cols,
               "terms": [{"word": words.to_json(w), "coeff": matrix_to_json(A)}
                         for w, A in self.terms.items()]}
        if self.declared_sup_norm is not None:
            out["declared_sup_norm"] = self.declared_sup_norm
            out["provenance"] = self.provenance
        if self.truncated:
            out["truncated"] = True
        return out

    @classmethod
    def from_json(cls, obj):
        try:
            n, rows, cols = int(obj["n"]), int(obj["rows"]), int(obj["cols"])
            raw = obj["terms"]
        except (KeyError, TypeError, ValueError) as exc:
            raise InputError(f"malformed series JSON: {exc}") from exc
        terms = {}
        for t in raw:
            w = words.from_json(t["word"], n)
            A = matrix_from_json(t["coeff"])
            terms[w] = terms[w] + A if w in terms else A
        return cls(n, rows, cols, terms, obj.get("declared_sup_norm"), obj.get("provenance"),
                   bool(obj.get("truncated", False)))


# evaluation

def _monomials(X, support):
    """X_w for every word in support (and all their suffixes), memoized."""
    h = X.shape[1]
    cache = {(): np.eye(h, dtype=np.complex128)}

    def get(w):
        if w not in cache:
            cache[w] = X[w[0] - 1] @ get(w[1:])
        return cache[w]

    for w in support:
        get(w)
    return cache


def eval_point(F, X):
    X = as_tuple(X)
    if X.shape[0] != F.n:
        raise ArityMismatch(f"series has {F.n} letters, tuple has {X.shape[0]}")
    h = X.shape[1]
    out = np.zeros((h * F.rows, h * F.cols), dtype=np.complex128)
    mono = _monomials(X, F.terms)
    for w, A in F.terms.items():
        out += np.kron(mono[w], A)
    return out


def eval_scalar(F, z):
    """F at a point z of C^n viewed as a tuple of 1x1 matrices."""
    z = np.asarray(z, dtype=np.complex128).reshape(-1)
    return eval_point(F, z.reshape(-1, 1, 1))


def shift_operator(F, r, model):
    """Sparse F(rS_1, ..., rS_n) on the model."""
    if F.n != model.n:
        raise ArityMismatch(f"series has {F.n} letters, model has {model.n}")
    if F.degree > model.d:
        warnings.warn("series degree exceeds model degree; high terms vanish on the model",
                      stacklevel=3)
    out = sp.csr_matrix((model.dim * F.rows, model.dim * F.cols), dtype=np.complex128)
    for w, A in F.terms.items():
        out = out + sp.kron((r ** len(w)) * model.monomial(w), sp.csr_matrix(A), format="csr")
    return out


def eval_shift(F, r, model):
    return shift_operator(F, r, model).toarray()


def sup_norm(F, r_grid, model):
    """(r, ||F(rS)||) along an ascending grid; the last value is a lower estimate of ||F||_inf."""
    r_grid = [float(r) for r in r_grid]
    if any(b <= a for a, b in zip(r_grid, r_grid[1:])):
        raise InputError("r_grid must be strictly ascending")
    return [(r, op_norm(eval_shift(F, r, model))) for r in r_grid]


def radius_estimate(F):
    """1 / max_k ||sum_{|w|=k} A^*A||^{1/(2k)} over supported k >= 1; inf for constants."""
    norms = {k: v for k, v in F.degree_norms().items() if k >= 1}
    rate = max((v ** (1.0 / k) for k, v in norms.items()), default=0.0)
    return np.inf if rate == 0.0 else 1.0 / rate


# products

def _dense_ok(F, G, d):
    return (len(F.terms) * len(G.terms) > _DENSE_PAIR_THRESHOLD
            and words.count_words(F.n, d) <= DENSE_WORD_CAP // max(1, F.rows * G.cols))


def mul(F, G, d_cap=None):
    """Cauchy product on the free monoid, terms above d_cap dropped."""
    if F.n != G.n:
        raise ArityMismatch(f"{F.n} vs {G.n} letters")
    if F.cols != G.rows:
        raise ShapeMismatch(f"cannot multiply {F.shape} by {G.shape}")
    full = F.degree + G.degree
    d = full if d_cap is None else min(int(d_cap), full)
    dropped = d < full and any(len(u) + len(v) > d for u in F.terms for v in G.terms)
    truncated = F.truncated or G.truncated or dropped
    if _dense_ok(F, G, d):
        C = _kernels.free_convolve(F.to_dense(d), G.to_dense(d), F.n, d)
        out = FreeSeries.from_dense(F.n, C, truncated=truncated)
        return out
    terms = {}
    for u, A in F.terms.items():
        for v, B in G.terms.items():
            if len(u) + len(v) > d:
                continue
            w = u + v
            P = A @ B
            terms[w] = terms[w] + P if w in terms else P
    return FreeSeries(F.n, F.rows, G.cols, terms, truncated=truncated)


def compose(F, Phi, d_cap):
    """Substitute the series Phi_j for the letters of F.

    All Phi_j share one square coefficient space Y; the coefficient of F o Phi at
    a word s is sum_w kron(coefficient of Phi_w at s, A_w).
    """
    Phi = list(Phi)
    if len(Phi) != F.n:
        raise ArityMismatch(f"F has {F.n} letters but {len(Phi)} series were given")
    n = Phi[0].n
    y = Phi[0].rows
    for P in Phi:
        if P.n != n or P.shape != (y, y):
            raise ShapeMismatch("substituted series must share arity and a square shape")
    memo = {(): FreeSeries.identity(n, y)}

    def power(w):
        if w not in memo:
            memo[w] = mul(power(w[:-1]), Phi[w[-1] - 1], d_cap)
        return memo[w]

    terms = {}
    truncated = F.truncated
    for w, A in F.terms.items():
        P = power(w)
        truncated = truncated or P.truncated
        for s, C in P.terms.items():
            K = np.kron(C, A)
            terms[s] = terms[s] + K if s in terms else K
    return FreeSeries(n, y * F.rows, y * F.cols, terms, truncated=truncated)


def coeff_extract(boundary, sigma, r, model, rows, cols):
    """Recover A_sigma from F(rS) by pairing against the vacuum."""
    sigma = tuple(sigma)
    if len(sigma) > model.d:
        raise DegreeExceeded(f"|sigma| = {len(sigma)} exceeds model degree {model.d}")
    if len(sigma) > 0 and not (0.0 < r):
        raise InputError("r must be positive to extract positive-degree coefficients")
    i = model.index(sigma)
    block = np.asarray(boundary)[i * rows:(i + 1) * rows, 0:cols]
    return block / (r ** len(sigma))


def invert_series(F, d_cap, cond_cap=1e8):
    """Inverse series through d_cap via the degree-by-degree recursion."""
    if F.rows != F.cols:
        raise ShapeMismatch("only square series are invertible")
    try:
        A0inv = invert(F.constant_term(), cond_cap)
    except NumericalError as exc:
        raise SingularConstantTerm(str(exc)) from exc
    d = int(d_cap)
    if F.degree == 0:
        return FreeSeries(F.n, F.rows, F.cols, {(): A0inv}, truncated=F.truncated)
    B = _kernels.free_inverse(F.to_dense(d), A0inv, F.n, d)
    return FreeSeries.from_dense(F.n, B, truncated=True)


def cayley(F, d_cap):
    """(F - I)(I + F)^{-1} through d_cap."""
    I = FreeSeries.identity(F.n, F.rows)
    return mul(F - I, invert_series(I + F, d_cap), d_cap)


def cayley_inv(G, d_cap):
    """(I + G)(I - G)^{-1} through d_cap."""
    I = FreeSeries.identity(G.n, G.rows)
    return mul(I + G, invert_series(I - G, d_cap), d_cap)


def theta_series(n, m, g):
    """Theta(X) = [X_b (x) I_g : |b| = m] as one series with g x (n^m g) coefficients."""
    terms = {}
    for b in words.words_of_length(n, m):
        E = np.zeros((g, n**m * g))
        j = words.rank(b, n)
        E[:, j * g:(j + 1) * g] = np.eye(g)
        terms[b] = E
    return FreeSeries(n, g, n**m * g, terms, declared_sup_norm=1.0, provenance="exact")


def gleason(F, m):
    """Gamma with F = Theta Gamma, Theta = theta_series(n, m, F.rows)."""
    if m < 1:
        raise InputError("m must be >= 1")
    low = [w for w in F.terms if len(w) < m]
    if low:
        raise LowDegreeTermsPresent(f"terms of degree < {m} present, e.g. {low[0]}")
    g = F.rows
    terms = {}
    for w, A in F.terms.items():
        b, c = w[:m], w[m:]
        j = words.rank(b, F.n)
        C = terms.setdefault(c, np.zeros((F.n**m * g, F.cols), np.complex128))
        C[j * g:(j + 1) * g] += A
    return FreeSeries(F.n, F.n**m * g, F.cols, terms, truncated=F.truncated)


def radial_profile(F, r_grid, model):
    """(r, smallest singular value of F(rS) on inputs of degree <= d - deg F)."""
    top = model.d - F.degree
    if top < 0:
        raise DegreeExceeded("series degree exceeds model degree")
    ncols = words.count_words(model.n, top) * F.cols
    out = []
    for r in r_grid:
        M = shift_operator(F, r, model)[:, :ncols].toarray()
        out.append((float(r), norm_extents(M)[1]))
    return out


# structure-theorem synthesis

def synth_herglotz(n, d_cap, model_aux, W):
    """G = W^*[2(I - sum X_i (x) V_i^*)^{-1} - I]W with V_i the aux creation operators.

    Coefficients: A_() = I and A_w = 2 W^* V_{w_1}^* ... V_{w_k}^* W.
    """
    W = as_matrix(W)
    if model_aux.n != n:
        raise ArityMismatch("aux model arity differs from n")
    if W.shape[0] != model_aux.dim:
        raise ShapeMismatch("W must map into the aux Fock space")
    e = W.shape[1]
    if np.linalg.norm(adjoint(W) @ W - np.eye(e)) > 1e-10:
        raise NotIsometry("W^*W != I")
    Vs = [S.T.tocsr() for S in model_aux.S]
    Wh = adjoint(W)
    terms = {(): np.eye(e)}
    level = {(): W}
    for k in range(1, int(d_cap) + 1):
        nxt = {}
        for w, Y in level.items():
            for i in range(1, n + 1):
                Z = Vs[i - 1] @ Y
                if np.any(Z != 0):
                    nxt[(i,) + w] = Z
        if not nxt:
            break
        for w, Y in nxt.items():
            terms[w] = 2.0 * (Wh @ Y)
        level = nxt
    truncated = bool(level) and int(d_cap) < model_aux.d
    return FreeSeries(n, e, e, terms, truncated=truncated)


def synth_schur(A0, G, d_cap):
    """F = Psi_{A0}[cayley(G)] through d_cap; F(0) = A0."""
    from .transforms import frac_series

    A0 = as_matrix(A0)
    if G.rows != G.cols or G.cols != A0.shape[1]:
        raise ShapeMismatch("G must be square on the domain space of A0")
    if G.rows != A0.shape[0]:
        raise ShapeMismatch("this construction needs square A0 (E -> E)")
    F = frac_series(A0, cayley(G, d_cap), d_cap)
    return F.with_norm(1.0, "exact")
