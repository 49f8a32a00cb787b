# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled versions of the packed-system kernels in ``_kernels_py``."""
import numpy as np
cimport numpy as cnp
from libc.math cimport fabs, sqrt, pow

cnp.import_array()

BACKEND = "cython"


cdef inline double _mono(const long long[:, ::1] exps, Py_ssize_t t,
                         const double[:, ::1] pts, Py_ssize_t p, Py_ssize_t n,
                         Py_ssize_t skip) noexcept nogil:
    cdef double v = 1.0
    cdef Py_ssize_t i
    cdef long long e
    for i in range(n):
        e = exps[t, i]
        if i == skip:
            e -= 1
        if e > 0:
            v *= pow(pts[p, i], <double>e)
    return v


def eval_packed(exps, coeffs, owner, Py_ssize_t k, pts):
    cdef const long long[:, ::1] E = np.ascontiguousarray(exps, dtype=np.int64)
    cdef const double[::1] C = np.ascontiguousarray(coeffs, dtype=np.float64)
    cdef const long long[::1] O = np.ascontiguousarray(owner, dtype=np.int64)
    cdef const double[:, ::1] X = np.ascontiguousarray(pts, dtype=np.float64)
    cdef Py_ssize_t m = X.shape[0], n = X.shape[1], T = E.shape[0]
    vals_a = np.zeros((m, k))
    mags_a = np.zeros((m, k))
    cdef double[:, ::1] V = vals_a
    cdef double[:, ::1] M = mags_a
    cdef Py_ssize_t p, t
    cdef double term
    with nogil:
        for p in range(m):
            for t in range(T):
                term = C[t] * _mono(E, t, X, p, n, -1)
                V[p, O[t]] += term
                M[p, O[t]] += fabs(term)
    return vals_a, mags_a


def eval_grad_packed(exps, coeffs, owner, Py_ssize_t k, pts):
    cdef const long long[:, ::1] E = np.ascontiguousarray(exps, dtype=np.int64)
    cdef const double[::1] C = np.ascontiguousarray(coeffs, dtype=np.float64)
    cdef const long long[::1] O = np.ascontiguousarray(owner, dtype=np.int64)
    cdef const double[:, ::1] X = np.ascontiguousarray(pts, dtype=np.float64)
    cdef Py_ssize_t m = X.shape[0], n = X.shape[1], T = E.shape[0]
    vals_a = np.zeros((m, k))
    jac_a = np.zeros((m, k, n))
    cdef double[:, ::1] V = vals_a
    cdef double[:, :, ::1] J = jac_a
    cdef Py_ssize_t p, t, j
    with nogil:
        for p in range(m):
            _value_jac(E, C, O, X, p, n, T, V, J)
    return vals_a, jac_a


cdef void _value_jac(const long long[:, ::1] E, const double[::1] C,
                     const long long[::1] O, const double[:, ::1] X,
                     Py_ssize_t p, Py_ssize_t n, Py_ssize_t T,
                     double[:, ::1] V, double[:, :, ::1] J) noexcept nogil:
    cdef Py_ssize_t t, j
    for t in range(T):
        V[p, O[t]] += C[t] * _mono(E, t, X, p, n, -1)
        for j in range(n):
            if E[t, j] > 0:
                J[p, O[t], j] += C[t] * E[t, j] * _mono(E, t, X, p, n, j)


cdef int _solve(double* A, double* b, Py_ssize_t k) noexcept nogil:
    # Gaussian elimination with partial pivoting, in place; A is k x k row-major
    cdef Py_ssize_t i, j, r, piv
    cdef double best, f, tmp
    for i in range(k):
        piv = i
        best = fabs(A[i * k + i])
        for r in range(i + 1, k):
            if fabs(A[r * k + i]) > best:
                best = fabs(A[r * k + i])
                piv = r
        if best == 0.0:
            return 1
        if piv != i:
            for j in range(k):
                tmp = A[i * k + j]
                A[i * k + j] = A[piv * k + j]
                A[piv * k + j] = tmp
            tmp = b[i]
            b[i] = b[piv]
            b[piv] = tmp
        for r in range(i + 1, k):
            f = A[r * k + i] / A[i * k + i]
            for j in range(i, k):
                A[r * k + j] -= f * A[i * k + j]
            b[r] -= f * b[i]
    for i in range(k - 1, -1, -1):
        tmp = b[i]
        for j in range(i + 1, k):
            tmp -= A[i * k + j] * b[j]
        b[i] = tmp / A[i * k + i]
    return 0


def newton_packed(exps, coeffs, owner, Py_ssize_t k, pts, caps, int iters=30, double tol=1e-12):
    cdef const long long[:, ::1] E = np.ascontiguousarray(exps, dtype=np.int64)
    cdef const double[::1] C = np.ascontiguousarray(coeffs, dtype=np.float64)
    cdef const long long[::1] O = np.ascontiguousarray(owner, dtype=np.int64)
    out = np.array(pts, dtype=np.float64, copy=True, order="C")
    cdef double[:, ::1] X = out
    cdef const double[::1] CAP = np.ascontiguousarray(caps, dtype=np.float64)
    cdef Py_ssize_t m = X.shape[0], n = X.shape[1], T = E.shape[0]
    if k == 0 or m == 0:
        return out
    vbuf = np.zeros((1, k))
    mbuf = np.zeros(k)
    jbuf = np.zeros((1, k, n))
    gbuf = np.zeros(k * k)
    lbuf = np.zeros(k)
    sbuf = np.zeros(n)
    cdef double[:, ::1] V = vbuf
    cdef double[::1] MG = mbuf
    cdef double[:, :, ::1] J = jbuf
    cdef double[::1] G = gbuf
    cdef double[::1] L = lbuf
    cdef double[::1] S = sbuf
    cdef Py_ssize_t p, it, a, b, j, t
    cdef double mx, mu, nrm, sc, term
    cdef bint done
    cdef const double[:, ::1] XC
    with nogil:
        for p in range(m):
            for it in range(iters):
                for a in range(k):
                    V[0, a] = 0.0
                    MG[a] = 0.0
                    for j in range(n):
                        J[0, a, j] = 0.0
                for t in range(T):
                    term = C[t] * _mono(E, t, X, p, n, -1)
                    V[0, O[t]] += term
                    MG[O[t]] += fabs(term)
                    for j in range(n):
                        if E[t, j] > 0:
                            J[0, O[t], j] += C[t] * E[t, j] * _mono(E, t, X, p, n, j)
                done = True
                for a in range(k):
                    if fabs(V[0, a]) > tol * MG[a]:
                        done = False
                if done:
                    break
                mx = 0.0
                for a in range(k):
                    for b in range(k):
                        term = 0.0
                        for j in range(n):
                            term += J[0, a, j] * J[0, b, j]
                        G[a * k + b] = term
                    if G[a * k + a] > mx:
                        mx = G[a * k + a]
                mu = 1e-14 * mx + 1e-300
                for a in range(k):
                    G[a * k + a] += mu
                    L[a] = V[0, a]
                if _solve(&G[0], &L[0], k):
                    break
                nrm = 0.0
                for j in range(n):
                    term = 0.0
                    for a in range(k):
                        term += J[0, a, j] * L[a]
                    S[j] = term
                    nrm += term * term
                nrm = sqrt(nrm)
                sc = 1.0
                if nrm > CAP[p]:
                    sc = CAP[p] / nrm
                for j in range(n):
                    X[p, j] -= S[j] * sc
    return out
