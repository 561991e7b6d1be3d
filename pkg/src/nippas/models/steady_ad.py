"""Steady advection-diffusion ``Re(z) v_x - v_xx = 0`` on (0, 1), ``v(0)=0, v(1)=1``.

Second-order central differences on ``n_pde`` interior points with
``dx = 1 / (n_pde + 1)``. The boundary value ``v(1) = 1`` moves to the right
hand side of the last row, giving ``S_N = -Re/(2 dx) + 1/dx^2``.
"""

from __future__ import annotations

import numpy as np
import scipy.sparse as sp
from scipy.linalg import solve_banded

from ..geometry import hypercube
from .base import BlackBoxModel, BlackBoxSample

PROFILES = {
    "Re1": lambda z: 99.0 * z + 1.0,
    "Re2": lambda z: 10.0 ** (2.0 * z),
    "Re3": lambda z: 10.0 ** (-2.0 * (z - 1.0)),
}


def selector_matrix(n_pde: int, qoi) -> np.ndarray | None:
    """``None`` for the identity, else a dense ``(n_qoi, n_pde)`` matrix."""
    if isinstance(qoi, str):
        if qoi == "identity":
            return None
        if qoi == "mid":
            qoi = (n_pde + 1) // 2 - 1
        else:
            raise ValueError(f"unknown qoi {qoi!r}; use 'identity', 'mid', an index or a matrix")
    if np.isscalar(qoi):
        k = int(qoi)
        if not 0 <= k < n_pde:
            raise ValueError(f"qoi index {k} outside 0..{n_pde - 1}")
        Q = np.zeros((1, n_pde))
        Q[0, k] = 1.0
        return Q
    Q = np.atleast_2d(np.asarray(qoi, dtype=float))
    if Q.shape[1] != n_pde:
        raise ValueError(f"qoi matrix has {Q.shape[1]} columns, grid has {n_pde} points")
    return Q


class SteadyAdvectionDiffusion(BlackBoxModel):
    name = "steady_ad"
    dim = 1
    n_terms = 2
    linear = True

    def __init__(self, profile: str = "Re1", n_pde: int = 999, qoi="mid"):
        if profile not in PROFILES:
            raise ValueError(f"unknown Reynolds profile {profile!r}; valid: {sorted(PROFILES)}")
        self.profile = profile
        self.reynolds = PROFILES[profile]
        self.n_pde = int(n_pde)
        self.dx = 1.0 / (self.n_pde + 1)
        self.x = self.dx * np.arange(1, self.n_pde + 1)
        self.qoi_spec = qoi
        self.Q = selector_matrix(self.n_pde, qoi)
        self.n_qoi = self.n_pde if self.Q is None else self.Q.shape[0]
        self.domain = hypercube((0.0,), (1.0,))
        n, dx = self.n_pde, self.dx
        self.L1 = sp.diags([-np.ones(n - 1), np.ones(n - 1)], [-1, 1], format="csr") / (2 * dx)
        self.L2 = sp.diags([np.ones(n - 1), -2 * np.ones(n), np.ones(n - 1)], [-1, 0, 1],
                           format="csr") / dx ** 2

    def __repr__(self):
        return f"SteadyAdvectionDiffusion(profile={self.profile!r}, n_pde={self.n_pde}, qoi={self.qoi_spec!r})"

    @property
    def supports_full_space(self) -> bool:
        return True

    @property
    def operators(self) -> list:
        return [self.L1, self.L2]

    def project(self, X) -> np.ndarray:
        """Apply Q along the last axis."""
        X = np.asarray(X, dtype=float)
        return X if self.Q is None else X @ self.Q.T

    @property
    def q_norm(self) -> float:
        return 1.0 if self.Q is None else float(np.linalg.norm(self.Q, 2))

    def re(self, z) -> float:
        return float(self.reynolds(float(np.asarray(z).ravel()[0])))

    def gammas(self, Z) -> np.ndarray:
        z = np.atleast_2d(np.asarray(Z, dtype=float))[:, 0]
        return np.column_stack([self.reynolds(z), -np.ones_like(z)])

    def _source_last(self, re):
        return -re / (2 * self.dx) + 1.0 / self.dx ** 2

    def full_source(self, z) -> np.ndarray:
        S = np.zeros(self.n_pde)
        S[-1] = self._source_last(self.re(z))
        return S

    def qoi_source(self, Z) -> np.ndarray:
        z = np.atleast_2d(np.asarray(Z, dtype=float))[:, 0]
        last = self._source_last(self.reynolds(z))
        col = np.ones(1) if self.Q is None else self.Q[:, -1]
        if self.Q is None:
            out = np.zeros((len(z), self.n_pde))
            out[:, -1] = last
            return out
        return last[:, None] * col[None, :]

    def _banded(self, re):
        dx = self.dx
        n = self.n_pde
        ab = np.empty((3, n))
        ab[0, :] = re / (2 * dx) - 1.0 / dx ** 2
        ab[1, :] = 2.0 / dx ** 2
        ab[2, :] = -re / (2 * dx) - 1.0 / dx ** 2
        return ab

    def operator(self, z):
        """Sparse ``Re(z) L1 - L2``."""
        return (self.re(z) * self.L1 - self.L2).tocsr()

    def solve_operator(self, z, rhs) -> np.ndarray:
        re = self.re(z)
        self._check_cell_re(re)
        return solve_banded((1, 1), self._banded(re), rhs)

    def _check_cell_re(self, re):
        if re * self.dx >= 2.0:
            raise ValueError(f"cell Reynolds number {re * self.dx:.3g} >= 2 (Re={re:.3g}, dx={self.dx:.3g})")

    def solve_full(self, z) -> np.ndarray:
        z = self.check_point(z)
        if not 0.0 <= z[0] <= 1.0:
            raise ValueError(f"z={z[0]} outside [0, 1]")
        return self.solve_operator(z, self.full_source(z))

    def sample(self, z) -> BlackBoxSample:
        v = self.solve_full(z)
        full_terms = np.vstack([self.L1 @ v, self.L2 @ v])
        return BlackBoxSample(u=self.project(v), terms=self.project(full_terms), v=v,
                              full_terms=full_terms)

    def qoi_batch(self, Z) -> np.ndarray:
        Z = np.atleast_2d(np.asarray(Z, dtype=float))
        V = np.array([self.solve_full(z) for z in Z])
        return self.project(V)

    def exact_qoi(self, Z) -> np.ndarray:
        """QoI of the continuous solution ``(e^{Re x} - 1) / (e^{Re} - 1)``."""
        z = np.atleast_2d(np.asarray(Z, dtype=float))[:, 0]
        re = self.reynolds(z)[:, None]
        with np.errstate(over="ignore"):
            V = np.expm1(re * self.x[None, :]) / np.expm1(re)
        return self.project(V)

    def inverse_operator_norm(self, z) -> float:
        A = self.operator(z).toarray()
        return float(1.0 / np.linalg.svd(A, compute_uv=False)[-1])
