"""Moore-Penrose pseudo-inverse maintained under column and row appends.

Greville's recursion: for ``A' = [A a]`` with ``d = G a`` and
``a2 = a - A d``, the new pseudo-inverse stacks ``G - d b^T`` over ``b^T``
where ``b = a2 / (a2 . a2)`` if ``a2`` is nonzero, else
``b = G^T d / (1 + d . d)``. Rows are appended by transposing.

The residual ``a2`` is re-projected twice (``d += G a2; a2 -= A G a2``) before
the rank decision. For an exact ``G`` that correction is zero; in floating
point it removes the cancellation error that otherwise grows like
``cond(A)^2 * eps`` and flips the zero/nonzero branch on square growth. One
pass is not enough once ``cond(A)`` passes about 1e7.
Every step is a matrix-vector product, O(n m).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

RANK_TOL = 1e-10
REPROJECT = 2


@dataclass(frozen=True)
class PinvState:
    A: np.ndarray
    G: np.ndarray

    @property
    def shape(self) -> tuple:
        return self.A.shape

    @classmethod
    def empty(cls) -> "PinvState":
        return cls(np.zeros((0, 0)), np.zeros((0, 0)))

    @classmethod
    def from_matrix(cls, A) -> "PinvState":
        """Build by appending columns one at a time (no dense pseudo-inverse)."""
        A = np.atleast_2d(np.asarray(A, dtype=float))
        n, m = A.shape
        state = cls(np.zeros((n, 0)), np.zeros((0, n)))
        for j in range(m):
            state = greville_append_column(state, A[:, j])
        return state


def _append_column(A, G, a, tol):
    n, m = A.shape
    if m == 0:
        # G of the empty n x 0 matrix is 0 x n; the recursion reduces to pinv of a column
        nrm2 = float(a @ a)
        b = a / nrm2 if nrm2 > 0.0 else np.zeros(n)
        return a.reshape(n, 1).copy(), b.reshape(1, n)
    d = G @ a
    a2 = a - A @ d
    for _ in range(REPROJECT):
        corr = G @ a2
        d = d + corr
        a2 = a2 - A @ corr
    if np.linalg.norm(a2) > tol * np.linalg.norm(a):
        b = a2 / (a2 @ a2)
    else:
        b = (G.T @ d) / (1.0 + d @ d)
    A_new = np.empty((n, m + 1))
    A_new[:, :m] = A
    A_new[:, m] = a
    G_new = np.empty((m + 1, n))
    G_new[:m] = G - np.outer(d, b)
    G_new[m] = b
    return A_new, G_new


def greville_append_column(state: PinvState, a, *, tol: float = RANK_TOL,
                           check: float | None = None, seed: int = 0) -> PinvState:
    """``A' = [A a]``. With ``check`` set, a :func:`penrose_probe` above it
    triggers a dense rebuild."""
    a = np.asarray(a, dtype=float).ravel()
    if state.A.shape == (0, 0):
        state = PinvState(np.zeros((len(a), 0)), np.zeros((0, len(a))))
    n = state.A.shape[0]
    if len(a) != n:
        raise ValueError(f"column of length {len(a)} appended to a matrix with {n} rows")
    return _checked(PinvState(*_append_column(state.A, state.G, a, tol)), check, seed)


def greville_append_row(state: PinvState, r, *, tol: float = RANK_TOL,
                        check: float | None = None, seed: int = 0) -> PinvState:
    """``A' = [A; r]`` via the column update of the transpose."""
    r = np.asarray(r, dtype=float).ravel()
    if state.A.shape == (0, 0):
        state = PinvState(np.zeros((0, len(r))), np.zeros((len(r), 0)))
    m = state.A.shape[1]
    if len(r) != m:
        raise ValueError(f"row of length {len(r)} appended to a matrix with {m} columns")
    At, Gt = _append_column(state.A.T, state.G.T, r, tol)
    return _checked(PinvState(np.ascontiguousarray(At.T), np.ascontiguousarray(Gt.T)), check, seed)


def _checked(state: PinvState, check, seed) -> PinvState:
    if check is not None and penrose_probe(state.A, state.G, seed) > check:
        return PinvState(state.A, direct_pinv(state.A))
    return state


def direct_pinv(A, rcond: float = 1e-12) -> np.ndarray:
    """Dense SVD pseudo-inverse, truncating singular values below ``rcond * s_max``."""
    A = np.atleast_2d(np.asarray(A, dtype=float))
    n, m = A.shape
    if A.size == 0:
        return np.zeros((m, n))
    U, s, Vt = np.linalg.svd(A, full_matrices=False)
    if s[0] == 0.0:
        return np.zeros((m, n))
    keep = s > rcond * s[0]
    return (Vt[keep].T / s[keep]) @ U[:, keep].T


def penrose_residuals(A, G, *, backward: bool = False) -> dict:
    """Violation of the four Penrose conditions in Frobenius norms.

    By default each residual is relative to the matrix it should reproduce
    (``A``, ``G``, ``AG``, ``GA``). With ``backward=True`` the scales are
    ``|A||G||A|``, ``|G||A||G|``, ``|A||G|`` and ``|A||G|``: the size of the
    rounding error in forming the products, so the floor is ``eps`` whatever
    ``cond(A)``.
    """
    A = np.asarray(A, dtype=float)
    G = np.asarray(G, dtype=float)
    AG, GA = A @ G, G @ A

    def rel(x, ref):
        den = ref if backward else np.linalg.norm(ref)
        return float(np.linalg.norm(x) / den) if den > 0 else float(np.linalg.norm(x))

    if backward:
        nA, nG = np.linalg.norm(A), np.linalg.norm(G)
        scales = (nA * nG * nA, nG * nA * nG, nA * nG, nA * nG)
    else:
        scales = (A, G, AG, GA)
    return {
        "AGA=A": rel(AG @ A - A, scales[0]),
        "GAG=G": rel(GA @ G - G, scales[1]),
        "AG sym": rel(AG - AG.T, scales[2]),
        "GA sym": rel(GA - GA.T, scales[3]),
    }


def penrose_probe(A, G, seed: int = 0) -> float:
    """Randomised estimate of the worst relative Penrose violation.

    Each condition is tested against random vectors only, so the cost is a
    handful of matrix-vector products, O(n m).
    """
    A = np.asarray(A, dtype=float)
    G = np.asarray(G, dtype=float)
    n, m = A.shape
    if n == 0 or m == 0:
        return 0.0
    rng = np.random.default_rng(seed)
    x, s, t = rng.standard_normal((3, m))
    y, u, w = rng.standard_normal((3, n))

    def rel(v, ref):
        den = np.linalg.norm(ref)
        return float(np.linalg.norm(v) / den) if den > 0 else float(np.linalg.norm(v))

    Ax, Gy = A @ x, G @ y
    p1 = rel(A @ (G @ Ax) - Ax, Ax)
    p2 = rel(G @ (A @ Gy) - Gy, Gy)
    # AG and GA are orthogonal projectors: compare bilinear forms both ways
    AGw, AGu = A @ (G @ w), A @ (G @ u)
    p3 = abs(u @ AGw - w @ AGu) / (np.linalg.norm(u) * np.linalg.norm(w))
    GAt, GAs = G @ (A @ t), G @ (A @ s)
    p4 = abs(s @ GAt - t @ GAs) / (np.linalg.norm(s) * np.linalg.norm(t))
    return max(p1, p2, p3, p4)


def grow_square(state: PinvState, col, row, *, tol: float = RANK_TOL, check: float | None = 1e-10,
                seed: int = 0) -> tuple[PinvState, bool]:
    """Border ``A`` with a new column then a new row by two Greville appends.

    With ``check`` set, the result is probed with :func:`penrose_probe`; above
    ``check`` it is replaced by :func:`direct_pinv` of the grown matrix. The
    recursion does not recover on its own after a nearly singular step.
    Returns ``(state, rebuilt)``.
    """
    if state.A.size:
        state = greville_append_column(state, col, tol=tol)
    state = greville_append_row(state, row, tol=tol)
    if check is not None and penrose_probe(state.A, state.G, seed) > check:
        return PinvState(state.A, direct_pinv(state.A)), True
    return state, False
