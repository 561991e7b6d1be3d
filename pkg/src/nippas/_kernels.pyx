# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled versions of the hot kernels; see ``_kernels_py`` for semantics."""

import numpy as np
cimport numpy as cnp
from libc.math cimport sqrt, fabs

cnp.import_array()


def cheb_vandermonde(Z, indices, lo, hi):
    cdef double[:, ::1] z = np.ascontiguousarray(Z, dtype=np.float64)
    cdef Py_ssize_t n = z.shape[0], d = z.shape[1]
    cdef cnp.intp_t[:, ::1] idx = np.ascontiguousarray(
        np.asarray(indices, dtype=np.intp).reshape(-1, d))
    cdef Py_ssize_t m = idx.shape[0]
    out_arr = np.ones((n, m), dtype=np.float64)
    if m == 0 or n == 0:
        return out_arr
    cdef double[:, ::1] out = out_arr
    cdef double[::1] lo_ = np.ascontiguousarray(lo, dtype=np.float64)
    cdef double[::1] hi_ = np.ascontiguousarray(hi, dtype=np.float64)
    cdef cnp.intp_t[::1] kmax = np.ascontiguousarray(
        np.asarray(indices, dtype=np.intp).reshape(-1, d).max(axis=0))
    cdef Py_ssize_t K = 0, i, j, k, p
    for i in range(d):
        if kmax[i] > K:
            K = kmax[i]
    cdef double[:, ::1] tab = np.empty((d, K + 1), dtype=np.float64)
    cdef double t, acc
    for p in range(n):
        for i in range(d):
            t = 2.0 * (z[p, i] - lo_[i]) / (hi_[i] - lo_[i]) - 1.0
            tab[i, 0] = 1.0
            if kmax[i] >= 1:
                tab[i, 1] = t
            for k in range(2, kmax[i] + 1):
                tab[i, k] = 2.0 * t * tab[i, k - 1] - tab[i, k - 2]
        for j in range(m):
            acc = 1.0
            for i in range(d):
                acc *= tab[i, idx[j, i]]
            out[p, j] = acc
    return out_arr


def rusanov_march(h, q, g, double dt, double dx, Py_ssize_t n_steps):
    h_arr = np.array(h, dtype=np.float64, order="C", copy=True)
    q_arr = np.array(q, dtype=np.float64, order="C", copy=True)
    cdef double[:, ::1] hv = h_arr
    cdef double[:, ::1] qv = q_arr
    cdef double[::1] gv = np.ascontiguousarray(np.asarray(g, dtype=np.float64).reshape(-1))
    cdef Py_ssize_t B = hv.shape[0], N = hv.shape[1]
    cdef double lam = dt / dx
    dh_arr = np.zeros(B)
    df_arr = np.zeros(B)
    cdef double[::1] dhdt0 = dh_arr
    cdef double[::1] dflux0 = df_arr
    cdef double[::1] H = np.empty(N + 2)
    cdef double[::1] Q = np.empty(N + 2)
    cdef double[::1] c = np.empty(N + 2)
    cdef double[::1] Fh = np.empty(N + 1)
    cdef double[::1] Fq = np.empty(N + 1)
    cdef double max_cfl = 0.0, gg, u, a, fl, fr, h0_old
    cdef Py_ssize_t b, s, i
    for b in range(B):
        gg = gv[b]
        for s in range(n_steps):
            for i in range(N):
                if hv[b, i] <= 0.0:
                    raise FloatingPointError("dry state: h <= 0")
                H[i + 1] = hv[b, i]
                Q[i + 1] = qv[b, i]
            H[0] = hv[b, 0]
            Q[0] = -qv[b, 0]
            H[N + 1] = hv[b, N - 1]
            Q[N + 1] = -qv[b, N - 1]
            for i in range(N + 2):
                c[i] = fabs(Q[i] / H[i]) + sqrt(gg * H[i])
                if c[i] * lam > max_cfl:
                    max_cfl = c[i] * lam
            for i in range(N + 1):
                a = c[i] if c[i] > c[i + 1] else c[i + 1]
                Fh[i] = 0.5 * (Q[i] + Q[i + 1]) - 0.5 * a * (H[i + 1] - H[i])
                u = Q[i] / H[i]
                fl = Q[i] * u + 0.5 * gg * H[i] * H[i]
                u = Q[i + 1] / H[i + 1]
                fr = Q[i + 1] * u + 0.5 * gg * H[i + 1] * H[i + 1]
                Fq[i] = 0.5 * (fl + fr) - 0.5 * a * (Q[i + 1] - Q[i])
            h0_old = hv[b, 0]
            for i in range(N):
                hv[b, i] = hv[b, i] - lam * (Fh[i + 1] - Fh[i])
                qv[b, i] = qv[b, i] - lam * (Fq[i + 1] - Fq[i])
            dhdt0[b] = (hv[b, 0] - h0_old) / dt
            dflux0[b] = (Fh[1] - Fh[0]) / dx
    return h_arr, q_arr, dh_arr, df_arr, max_cfl
