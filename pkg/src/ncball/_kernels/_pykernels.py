"""Numpy implementations of the word-indexed kernels.

All arrays are laid out in graded lexicographic word order: level k holds the
n**k words of length k, and the children of the word at rank p on level k are
the ranks p*n .. p*n+n-1 on level k+1 (appending a letter on the right).
"""
import numpy as np


def level_offsets(n, d):
    """Start index of every level 0..d+1 (the last entry is the total count)."""
    offs = np.zeros(d + 2, dtype=np.int64)
    for k in range(d + 1):
        offs[k + 1] = offs[k] + n**k
    return offs


def _levels(a, n, d):
    offs = level_offsets(n, d)
    return [a[offs[k]:offs[k + 1]] for k in range(d + 1)]


def free_convolve(A, B, n, d):
    """Cauchy product on the free monoid: C[w] = sum over splits w=uv of A[u] @ B[v]."""
    A = np.ascontiguousarray(A, dtype=np.complex128)
    B = np.ascontiguousarray(B, dtype=np.complex128)
    la = _levels(A, n, d)
    lb = _levels(B, n, d)
    C = np.zeros((A.shape[0], A.shape[1], B.shape[2]), dtype=np.complex128)
    lc = _levels(C, n, d)
    for k in range(d + 1):
        p = np.arange(n**k)
        for j in range(k + 1):
            q = n ** (k - j)
            lc[k] += np.matmul(la[j][p // q], lb[k - j][p % q])
    return C


def free_inverse(A, A0inv, n, d):
    """Coefficients of the inverse series, solved degree by degree."""
    A = np.ascontiguousarray(A, dtype=np.complex128)
    A0inv = np.asarray(A0inv, dtype=np.complex128)
    la = _levels(A, n, d)
    B = np.zeros_like(A)
    lb = _levels(B, n, d)
    lb[0][0] = A0inv
    for k in range(1, d + 1):
        p = np.arange(n**k)
        acc = np.zeros_like(lb[k])
        for j in range(1, k + 1):
            q = n ** (k - j)
            acc += np.matmul(la[j][p // q], lb[k - j][p % q])
        lb[k][:] = -np.matmul(A0inv, acc)
    return B


# Tree sweeps.  v has shape (words, h); B has shape (n, h, h) and acts on rows.

def raise_solve(v, B, n, d):
    """w = (I - N)^{-1} v where (N v)[parent.i] = v[parent] @ B[i]."""
    w = np.array(v, dtype=np.complex128, copy=True)
    lw = _levels(w, n, d)
    for k in range(d):
        step = np.matmul(lw[k][None, :, :], B)  # (n, n**k, h)
        lw[k + 1] += step.transpose(1, 0, 2).reshape(lw[k + 1].shape)
    return w


def raise_apply(v, B, n, d):
    """u = (I - N) v."""
    v = np.asarray(v, dtype=np.complex128)
    u = v.copy()
    lv = _levels(v, n, d)
    lu = _levels(u, n, d)
    for k in range(d):
        step = np.matmul(lv[k][None, :, :], B)
        lu[k + 1] -= step.transpose(1, 0, 2).reshape(lu[k + 1].shape)
    return u


def lower_solve(v, Bh, n, d):
    """w = (I - N*)^{-1} v where (N* v)[parent] = sum_i v[parent.i] @ Bh[i]."""
    w = np.array(v, dtype=np.complex128, copy=True)
    lw = _levels(w, n, d)
    h = w.shape[1]
    for k in range(d - 1, -1, -1):
        child = lw[k + 1].reshape(n**k, n, h)
        lw[k] += np.einsum("pia,iab->pb", child, Bh)
    return w


def lower_apply(v, Bh, n, d):
    """u = (I - N*) v."""
    v = np.asarray(v, dtype=np.complex128)
    u = v.copy()
    lv = _levels(v, n, d)
    lu = _levels(u, n, d)
    h = v.shape[1]
    for k in range(d):
        child = lv[k + 1].reshape(n**k, n, h)
        lu[k] -= np.einsum("pia,iab->pb", child, Bh)
    return u


def riccati_depth(A, B, C, D, g2, depth, conv_tol=1e-15):
    """Run the tree value recursion at level gamma^2 = g2.

    For the tree system x(w.k) = A_k x(w) + B_k u(w), y(w) = C x(w) + D u(w),
    P_r is the value matrix of a subtree with r levels below the root.  Level r
    is feasible when g2 I - D*D - sum B_k* P_{r-1} B_k is positive definite.
    Returns the number of feasible levels (depth + 1 if all of 0..depth are).
    """
    A = np.asarray(A, dtype=np.complex128)
    B = np.asarray(B, dtype=np.complex128)
    C = np.asarray(C, dtype=np.complex128)
    D = np.asarray(D, dtype=np.complex128)
    Ah = np.conj(np.swapaxes(A, 1, 2))
    Bh = np.conj(np.swapaxes(B, 1, 2))
    CC = C.conj().T @ C
    CD = C.conj().T @ D
    DD = D.conj().T @ D
    m = B.shape[2]
    P = np.zeros((A.shape[1], A.shape[1]), dtype=np.complex128)
    eye = g2 * np.eye(m)
    for r in range(depth + 1):
        PB = P @ B
        R = eye - DD - (Bh @ PB).sum(axis=0)
        try:
            G = np.linalg.cholesky(0.5 * (R + R.conj().T))
        except np.linalg.LinAlgError:
            return r
        if np.min(np.real(np.diag(G))) ** 2 <= 1e-15 * max(np.max(np.real(np.diag(R))), 0.0):
            return r
        L = CD + (Ah @ PB).sum(axis=0)
        W = np.linalg.solve(G, L.conj().T).conj().T
        Pn = CC + (Ah @ P @ A).sum(axis=0) + W @ W.conj().T
        diff = np.max(np.abs(Pn - P))
        P = Pn
        if diff <= conv_tol * (1.0 + np.max(np.abs(P))):
            return depth + 1
    return depth + 1
