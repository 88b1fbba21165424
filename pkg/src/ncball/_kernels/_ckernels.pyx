# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled word-indexed kernels (same contracts as _pykernels)."""
import numpy as np
cimport numpy as cnp

cnp.import_array()


cdef Py_ssize_t[::1] _offsets(Py_ssize_t n, Py_ssize_t d):
    cdef Py_ssize_t[::1] offs = np.zeros(d + 2, dtype=np.intp)
    cdef Py_ssize_t k, p = 1
    for k in range(d + 1):
        offs[k + 1] = offs[k] + p
        p *= n
    return offs


cdef Py_ssize_t[::1] _powers(Py_ssize_t n, Py_ssize_t d):
    cdef Py_ssize_t[::1] pw = np.zeros(d + 1, dtype=np.intp)
    cdef Py_ssize_t k
    pw[0] = 1
    for k in range(1, d + 1):
        pw[k] = pw[k - 1] * n
    return pw


def free_convolve(A, B, Py_ssize_t n, Py_ssize_t d):
    cdef double complex[:, :, ::1] a = np.ascontiguousarray(A, dtype=np.complex128)
    cdef double complex[:, :, ::1] b = np.ascontiguousarray(B, dtype=np.complex128)
    cdef Py_ssize_t rows = a.shape[1], mid = a.shape[2], cols = b.shape[2]
    out = np.zeros((a.shape[0], rows, cols), dtype=np.complex128)
    cdef double complex[:, :, ::1] c = out
    cdef Py_ssize_t[::1] offs = _offsets(n, d)
    cdef Py_ssize_t[::1] pw = _powers(n, d)
    cdef Py_ssize_t k, j, p, q, w, u, v, r, s, t
    cdef double complex acc
    for k in range(d + 1):
        for p in range(pw[k]):
            w = offs[k] + p
            for j in range(k + 1):
                q = pw[k - j]
                u = offs[j] + p // q
                v = offs[k - j] + p % q
                for r in range(rows):
                    for s in range(cols):
                        acc = 0
                        for t in range(mid):
                            acc = acc + a[u, r, t] * b[v, t, s]
                        c[w, r, s] = c[w, r, s] + acc
    return out


def free_inverse(A, A0inv, Py_ssize_t n, Py_ssize_t d):
    cdef double complex[:, :, ::1] a = np.ascontiguousarray(A, dtype=np.complex128)
    cdef double complex[:, ::1] a0i = np.ascontiguousarray(A0inv, dtype=np.complex128)
    cdef Py_ssize_t m = a.shape[1]
    out = np.zeros((a.shape[0], m, m), dtype=np.complex128)
    cdef double complex[:, :, ::1] b = out
    cdef double complex[:, ::1] acc = np.zeros((m, m), dtype=np.complex128)
    cdef Py_ssize_t[::1] offs = _offsets(n, d)
    cdef Py_ssize_t[::1] pw = _powers(n, d)
    cdef Py_ssize_t k, j, p, q, w, u, v, r, s, t
    cdef double complex z
    for r in range(m):
        for s in range(m):
            b[0, r, s] = a0i[r, s]
    for k in range(1, d + 1):
        for p in range(pw[k]):
            w = offs[k] + p
            for r in range(m):
                for s in range(m):
                    acc[r, s] = 0
            for j in range(1, k + 1):
                q = pw[k - j]
                u = offs[j] + p // q
                v = offs[k - j] + p % q
                for r in range(m):
                    for t in range(m):
                        z = a[u, r, t]
                        if z != 0:
                            for s in range(m):
                                acc[r, s] = acc[r, s] + z * b[v, t, s]
            for r in range(m):
                for s in range(m):
                    z = 0
                    for t in range(m):
                        z = z + a0i[r, t] * acc[t, s]
                    b[w, r, s] = -z
    return out


def raise_solve(v, B, Py_ssize_t n, Py_ssize_t d):
    out = np.array(v, dtype=np.complex128, order="C", copy=True)
    cdef double complex[:, ::1] w = out
    cdef double complex[:, :, ::1] bm = np.ascontiguousarray(B, dtype=np.complex128)
    cdef Py_ssize_t h = w.shape[1]
    cdef Py_ssize_t[::1] offs = _offsets(n, d)
    cdef Py_ssize_t[::1] pw = _powers(n, d)
    cdef Py_ssize_t k, p, i, par, ch, a, b
    cdef double complex x
    for k in range(d):
        for p in range(pw[k]):
            par = offs[k] + p
            for i in range(n):
                ch = offs[k + 1] + p * n + i
                for a in range(h):
                    x = w[par, a]
                    if x != 0:
                        for b in range(h):
                            w[ch, b] = w[ch, b] + x * bm[i, a, b]
    return out


def raise_apply(v, B, Py_ssize_t n, Py_ssize_t d):
    cdef double complex[:, ::1] src = np.ascontiguousarray(v, dtype=np.complex128)
    out = np.array(src, copy=True)
    cdef double complex[:, ::1] u = out
    cdef double complex[:, :, ::1] bm = np.ascontiguousarray(B, dtype=np.complex128)
    cdef Py_ssize_t h = u.shape[1]
    cdef Py_ssize_t[::1] offs = _offsets(n, d)
    cdef Py_ssize_t[::1] pw = _powers(n, d)
    cdef Py_ssize_t k, p, i, par, ch, a, b
    cdef double complex x
    for k in range(d):
        for p in range(pw[k]):
            par = offs[k] + p
            for i in range(n):
                ch = offs[k + 1] + p * n + i
                for a in range(h):
                    x = src[par, a]
                    if x != 0:
                        for b in range(h):
                            u[ch, b] = u[ch, b] - x * bm[i, a, b]
    return out


def lower_solve(v, Bh, Py_ssize_t n, Py_ssize_t d):
    out = np.array(v, dtype=np.complex128, order="C", copy=True)
    cdef double complex[:, ::1] w = out
    cdef double complex[:, :, ::1] bm = np.ascontiguousarray(Bh, dtype=np.complex128)
    cdef Py_ssize_t h = w.shape[1]
    cdef Py_ssize_t[::1] offs = _offsets(n, d)
    cdef Py_ssize_t[::1] pw = _powers(n, d)
    cdef Py_ssize_t k, p, i, par, ch, a, b
    cdef double complex x
    for k in range(d - 1, -1, -1):
        for p in range(pw[k]):
            par = offs[k] + p
            for i in range(n):
                ch = offs[k + 1] + p * n + i
                for a in range(h):
                    x = w[ch, a]
                    if x != 0:
                        for b in range(h):
                            w[par, b] = w[par, b] + x * bm[i, a, b]
    return out


def lower_apply(v, Bh, Py_ssize_t n, Py_ssize_t d):
    cdef double complex[:, ::1] src = np.ascontiguousarray(v, dtype=np.complex128)
    out = np.array(src, copy=True)
    cdef double complex[:, ::1] u = out
    cdef double complex[:, :, ::1] bm = np.ascontiguousarray(Bh, dtype=np.complex128)
    cdef Py_ssize_t h = u.shape[1]
    cdef Py_ssize_t[::1] offs = _offsets(n, d)
    cdef Py_ssize_t[::1] pw = _powers(n, d)
    cdef Py_ssize_t k, p, i, par, ch, a, b
    cdef double complex x
    for k in range(d):
        for p in range(pw[k]):
            par = offs[k] + p
            for i in range(n):
                ch = offs[k + 1] + p * n + i
                for a in range(h):
                    x = src[ch, a]
                    if x != 0:
                        for b in range(h):
                            u[par, b] = u[par, b] - x * bm[i, a, b]
    return out


cdef int _cholesky(double complex[:, ::1] R, double complex[:, ::1] G, Py_ssize_t m) noexcept nogil:
    """Lower Cholesky factor of a Hermitian matrix; returns 0 unless R is positive definite."""
    cdef Py_ssize_t i, j, k
    cdef double complex s
    cdef double piv, scale = 0.0
    for i in range(m):
        if R[i, i].real > scale:
            scale = R[i, i].real
    for j in range(m):
        s = R[j, j]
        for k in range(j):
            s = s - G[j, k] * G[j, k].conjugate()
        piv = s.real
        if not (piv > 1e-15 * scale) or piv <= 0.0:
            return 0
        G[j, j] = piv ** 0.5
        for i in range(j + 1, m):
            s = R[i, j]
            for k in range(j):
                s = s - G[i, k] * G[j, k].conjugate()
            G[i, j] = s / G[j, j]
        for i in range(j):
            G[i, j] = 0
    return 1


def riccati_depth(A, B, C, D, double g2, Py_ssize_t depth, double conv_tol=1e-15):
    """Run the tree value recursion at level gamma^2 = g2.

    Returns the number of levels that stayed feasible (depth + 1 means all
    levels 0..depth were feasible).  Converged recursions stop early.
    """
    cdef double complex[:, :, ::1] a = np.ascontiguousarray(A, dtype=np.complex128)
    cdef double complex[:, :, ::1] b = np.ascontiguousarray(B, dtype=np.complex128)
    cdef double complex[:, ::1] c = np.ascontiguousarray(C, dtype=np.complex128)
    cdef double complex[:, ::1] dd = np.ascontiguousarray(D, dtype=np.complex128)
    cdef Py_ssize_t n = a.shape[0], h = a.shape[1], m = b.shape[2], p = c.shape[0]
    cdef double complex[:, ::1] P = np.zeros((h, h), dtype=np.complex128)
    cdef double complex[:, ::1] Pn = np.zeros((h, h), dtype=np.complex128)
    cdef double complex[:, ::1] R = np.zeros((m, m), dtype=np.complex128)
    cdef double complex[:, ::1] G = np.zeros((m, m), dtype=np.complex128)
    cdef double complex[:, ::1] L = np.zeros((h, m), dtype=np.complex128)
    cdef double complex[:, ::1] W = np.zeros((h, m), dtype=np.complex128)
    cdef double complex[:, ::1] PB = np.zeros((h, m), dtype=np.complex128)
    cdef double complex[:, ::1] PA = np.zeros((h, h), dtype=np.complex128)
    cdef double complex[:, ::1] CC = np.zeros((h, h), dtype=np.complex128)
    cdef double complex[:, ::1] CD = np.zeros((h, m), dtype=np.complex128)
    cdef double complex[:, ::1] DD = np.zeros((m, m), dtype=np.complex128)
    cdef Py_ssize_t r, k, i, j, t
    cdef double complex s
    cdef double diff, big
    cdef Py_ssize_t result = depth + 1
    for i in range(h):
        for j in range(h):
            s = 0
            for t in range(p):
                s = s + c[t, i].conjugate() * c[t, j]
            CC[i, j] = s
        for j in range(m):
            s = 0
            for t in range(p):
                s = s + c[t, i].conjugate() * dd[t, j]
            CD[i, j] = s
    for i in range(m):
        for j in range(m):
            s = 0
            for t in range(p):
                s = s + dd[t, i].conjugate() * dd[t, j]
            DD[i, j] = s
    for r in range(depth + 1):
        # R = g2 I - D*D - sum_k B_k* P B_k ;  L = C*D + sum_k A_k* P B_k
        for i in range(m):
            for j in range(m):
                R[i, j] = -DD[i, j]
            R[i, i] = R[i, i] + g2
        for i in range(h):
            for j in range(m):
                L[i, j] = CD[i, j]
        for i in range(h):
            for j in range(h):
                Pn[i, j] = CC[i, j]
        for k in range(n):
            for i in range(h):
                for j in range(m):
                    s = 0
                    for t in range(h):
                        s = s + P[i, t] * b[k, t, j]
                    PB[i, j] = s
                for j in range(h):
                    s = 0
                    for t in range(h):
                        s = s + P[i, t] * a[k, t, j]
                    PA[i, j] = s
            for i in range(m):
                for j in range(m):
                    s = 0
                    for t in range(h):
                        s = s + b[k, t, i].conjugate() * PB[t, j]
                    R[i, j] = R[i, j] - s
            for i in range(h):
                for j in range(m):
                    s = 0
                    for t in range(h):
                        s = s + a[k, t, i].conjugate() * PB[t, j]
                    L[i, j] = L[i, j] + s
                for j in range(h):
                    s = 0
                    for t in range(h):
                        s = s + a[k, t, i].conjugate() * PA[t, j]
                    Pn[i, j] = Pn[i, j] + s
        if not _cholesky(R, G, m):
            result = r
            break
        # W = L G^{-*}: solve W G* = L row by row (forward substitution)
        for i in range(h):
            for j in range(m):
                s = L[i, j]
                for t in range(j):
                    s = s - W[i, t] * G[j, t].conjugate()
                W[i, j] = s / G[j, j].conjugate()
        diff = 0.0
        big = 0.0
        for i in range(h):
            for j in range(h):
                s = Pn[i, j]
                for t in range(m):
                    s = s + W[i, t] * W[j, t].conjugate()
                if abs(s - P[i, j]) > diff:
                    diff = abs(s - P[i, j])
                if abs(s) > big:
                    big = abs(s)
                Pn[i, j] = s
        for i in range(h):
            for j in range(h):
                P[i, j] = Pn[i, j]
        if diff <= conv_tol * (1.0 + big):
            break
    return result
