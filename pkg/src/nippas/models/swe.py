"""1D shallow-water dambreak on [-1, 1] with reflective walls.

Parameters are chart coordinates ``s`` on the unit triangle, mapped to
``(g, h_l, v_l)``. The initial state is ``(h_l, h_l v_l)`` left of ``x = 0``
and ``(1, 0)`` right of it. First-order local Lax-Friedrichs finite volumes
with a fixed step ``dt = t_end / ceil(t_end * max_speed / (cfl * dx))``; the
realised CFL number is checked after the march.

The quantity of interest is ``h`` in the leftmost cell at ``t_end``. The two
operator terms are the mass-equation pieces on that cell from the last step:
``dh/dt`` and the flux difference, both with coefficient 1.
"""

from __future__ import annotations

import math

import numpy as np

from .. import kernels
from ..geometry import SimplexChart, simplex_domain
from .base import BlackBoxModel, BlackBoxSample


class ShallowWaterDambreak(BlackBoxModel):
    name = "swe_dambreak"
    dim = 2
    n_terms = 2
    n_qoi = 1

    def __init__(self, n_cells: int = 2000, cfl: float = 0.45, max_speed: float = 6.0,
                 t_end: float = 1.0, chart: SimplexChart | None = None):
        if n_cells < 2 or n_cells % 2:
            raise ValueError("n_cells must be an even integer >= 2")
        if not 0.0 < cfl <= 1.0:
            raise ValueError(f"cfl={cfl} must lie in (0, 1]")
        self.n_cells = int(n_cells)
        self.cfl = float(cfl)
        self.max_speed = float(max_speed)
        self.t_end = float(t_end)
        self.chart = chart or SimplexChart()
        self.domain = simplex_domain()
        self.dx = 2.0 / self.n_cells
        self.n_steps = max(1, math.ceil(self.t_end * self.max_speed / (self.cfl * self.dx)))
        self.dt = self.t_end / self.n_steps
        self.xc = -1.0 + (np.arange(self.n_cells) + 0.5) * self.dx

    def __repr__(self):
        return (f"ShallowWaterDambreak(n_cells={self.n_cells}, cfl={self.cfl!r}, "
                f"max_speed={self.max_speed!r}, t_end={self.t_end!r}, "
                f"chart={self.chart.corners!r})")

    def gammas(self, Z) -> np.ndarray:
        return np.ones((len(np.atleast_2d(Z)), 2))

    def qoi_source(self, Z) -> np.ndarray:
        return np.zeros((len(np.atleast_2d(Z)), 1))

    def physical(self, S) -> np.ndarray:
        """``(n, 3)`` array of ``(g, h_l, v_l)``; raises outside the triangle."""
        S = np.atleast_2d(np.asarray(S, dtype=float))
        if S.shape[1] != 2:
            raise ValueError(f"expected chart points (s1, s2), got dimension {S.shape[1]}")
        tol = 1e-12
        bad = (S[:, 0] < -tol) | (S[:, 1] < -tol) | (S.sum(axis=1) > 1.0 + tol)
        if np.any(bad):
            raise ValueError(f"chart point {tuple(S[np.argmax(bad)])} outside the unit triangle")
        return self.chart.map(S)

    def initial_state(self, P) -> tuple[np.ndarray, np.ndarray]:
        P = np.atleast_2d(P)
        if np.any(P[:, 1] <= 0.0):
            raise ValueError("left depth h_l must be positive")
        left = self.xc <= 0.0
        h = np.where(left[None, :], P[:, 1:2], 1.0)
        q = np.where(left[None, :], P[:, 1:2] * P[:, 2:3], 0.0)
        return h, q

    def march(self, S):
        """Run the solver for a batch; returns the kernel output plus the physical params."""
        P = self.physical(S)
        h, q = self.initial_state(P)
        out = kernels.rusanov_march(h, q, P[:, 0].copy(), self.dt, self.dx, self.n_steps)
        if out[4] > 1.0:
            raise FloatingPointError(f"CFL number {out[4]:.3g} exceeded 1; raise max_speed "
                                     f"(currently {self.max_speed})")
        return out, P

    def sample_batch(self, S) -> tuple[np.ndarray, np.ndarray]:
        (h, _, dhdt, dflux, _), _ = self.march(S)
        terms = np.stack([dhdt, dflux], axis=1)[:, :, None]
        return h[:, :1].copy(), terms

    def sample(self, z) -> BlackBoxSample:
        z = self.check_point(z)
        u, terms = self.sample_batch(z[None, :])
        return BlackBoxSample(u=u[0], terms=terms[0])

    def qoi_batch(self, Z, chunk: int = 64) -> np.ndarray:
        Z = np.atleast_2d(np.asarray(Z, dtype=float))
        out = np.empty((len(Z), 1))
        for s in range(0, len(Z), chunk):
            out[s:s + chunk] = self.sample_batch(Z[s:s + chunk])[0]
        return out

    def solve_state(self, s):
        """Final ``(h, q)`` for one chart point (diagnostics and tests)."""
        (h, q, *_), _ = self.march(np.asarray(s, dtype=float)[None, :])
        return h[0], q[0]

    def trivial_point(self) -> np.ndarray:
        """Chart point where ``h_l = 1, v_l = 0`` (no jump)."""
        c = self.chart.corner_array
        # solve s1 c1 + s2 c2 + (1 - s1 - s2) c3 = (*, 1, 0) in the last two coordinates
        M = np.column_stack([c[0, 1:] - c[2, 1:], c[1, 1:] - c[2, 1:]])
        return np.linalg.solve(M, np.array([1.0, 0.0]) - c[2, 1:])
