"""Pure NumPy implementations of the hot kernels.

Same signatures and semantics as the compiled ``_kernels`` extension; used
when the extension is unavailable or ``NIPPAS_PURE_PYTHON`` is set.
"""

import numpy as np


def cheb_vandermonde(Z, indices, lo, hi):
    """Rows ``phi_j(z_i) = prod_k T_{m_jk}(t_ik)`` with ``t = 2(z - lo)/(hi - lo) - 1``.

    Z : (n, d) points, indices : (m, d) non-negative ints. Returns (n, m).
    """
    Z = np.asarray(Z, dtype=np.float64)
    n, d = Z.shape
    idx = np.asarray(indices, dtype=np.intp).reshape(-1, d)
    m = idx.shape[0]
    out = np.ones((n, m))
    if m == 0 or n == 0:
        return out
    lo = np.asarray(lo, dtype=np.float64)
    hi = np.asarray(hi, dtype=np.float64)
    T = 2.0 * (Z - lo) / (hi - lo) - 1.0
    kmax = idx.max(axis=0)
    for i in range(d):
        K = int(kmax[i])
        if K == 0:
            continue
        t = T[:, i]
        tab = np.empty((K + 1, n))
        tab[0] = 1.0
        tab[1] = t
        for k in range(2, K + 1):
            tab[k] = 2.0 * t * tab[k - 1] - tab[k - 2]
        out *= tab[idx[:, i]].T
    return out


def rusanov_march(h, q, g, dt, dx, n_steps):
    """First-order local Lax-Friedrichs march of the 1D shallow-water equations
    with reflective walls, for a batch of independent runs.

    h, q : (B, N) depth and discharge; g : (B,) gravity. Returns
    ``(h, q, dhdt0, dflux0, max_cfl)`` where the last-step mass-equation terms
    at the leftmost cell satisfy ``dhdt0 + dflux0 = 0`` up to rounding.
    """
    h = np.array(h, dtype=np.float64)
    q = np.array(q, dtype=np.float64)
    g = np.asarray(g, dtype=np.float64).reshape(-1, 1)
    B, N = h.shape
    lam = dt / dx
    max_cfl = 0.0
    dhdt0 = np.zeros(B)
    dflux0 = np.zeros(B)
    H = np.empty((B, N + 2))
    Q = np.empty((B, N + 2))
    for _ in range(n_steps):
        if np.any(h <= 0.0):
            raise FloatingPointError("dry state: h <= 0")
        H[:, 1:-1] = h
        H[:, 0] = h[:, 0]
        H[:, -1] = h[:, -1]
        Q[:, 1:-1] = q
        Q[:, 0] = -q[:, 0]
        Q[:, -1] = -q[:, -1]
        U = Q / H
        c = np.abs(U) + np.sqrt(g * H)
        max_cfl = max(max_cfl, float(c.max()) * lam)
        fh = Q
        fq = Q * U + 0.5 * g * H * H
        a = np.maximum(c[:, :-1], c[:, 1:])
        Fh = 0.5 * (fh[:, :-1] + fh[:, 1:]) - 0.5 * a * (H[:, 1:] - H[:, :-1])
        Fq = 0.5 * (fq[:, :-1] + fq[:, 1:]) - 0.5 * a * (Q[:, 1:] - Q[:, :-1])
        h_new = h - lam * (Fh[:, 1:] - Fh[:, :-1])
        q = q - lam * (Fq[:, 1:] - Fq[:, :-1])
        dhdt0 = (h_new[:, 0] - h[:, 0]) / dt
        dflux0 = (Fh[:, 1] - Fh[:, 0]) / dx
        h = h_new
    return h, q, dhdt0, dflux0, max_cfl
