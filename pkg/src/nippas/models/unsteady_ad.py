"""Periodic advection-diffusion ``v_t + z1 v_x = z2 v_xx`` on [0, 2pi], ``v(x, 0) = sin x``.

Fourier spectral differentiation on ``x_j = 2 pi j / n_x``. The scheme is
linear and diagonal in Fourier space, so each time step multiplies mode ``k``
by the scheme's amplification factor; this is the same recursion as marching
with the dense matrices ``D_x`` and ``D_x @ D_x`` but costs O(n_x) per step.

The quantity of interest is ``v`` at ``x = 2 pi`` (grid index 0 by
periodicity) at ``t = t_end``. The three operator terms are evaluated on the
final step so that ``term1 + z1 term2 - z2 term3 = 0`` holds per scheme.
"""

from __future__ import annotations

import numpy as np

from ..geometry import TWO_PI, Domain, hypercube
from .base import BlackBoxModel, BlackBoxSample

SCHEMES = ("BE", "CN", "RK4")
RK4_REAL_LIMIT = 2.785293563405282  # |1 + x + x^2/2 + x^3/6 + x^4/24| = 1 at x = -this


def wavenumbers(n_x: int) -> np.ndarray:
    """Integer wavenumbers with the Nyquist mode zeroed (odd derivative convention)."""
    k = np.fft.fftfreq(n_x, 1.0 / n_x)
    if n_x % 2 == 0:
        k[n_x // 2] = 0.0
    return k


def fourier_diff_matrix(n_x: int) -> np.ndarray:
    """Dense first-derivative matrix ``D_x`` on the periodic grid."""
    k = wavenumbers(n_x)
    F = np.fft.fft(np.eye(n_x), axis=0)
    return np.real(np.fft.ifft(1j * k[:, None] * F, axis=0))


def amplification(scheme: str, mu):
    if scheme == "BE":
        return 1.0 / (1.0 - mu)
    if scheme == "CN":
        return (1.0 + 0.5 * mu) / (1.0 - 0.5 * mu)
    if scheme == "RK4":
        return 1.0 + mu * (1.0 + mu * (0.5 + mu * (1.0 / 6.0 + mu / 24.0)))
    raise ValueError(f"unknown scheme {scheme!r}; valid: {SCHEMES}")


def stage_average(scheme: str, mu):
    """Factor ``ybar / v^{n-1}`` such that ``v^n = v^{n-1} + dt * L ybar``."""
    g = amplification(scheme, mu)
    if scheme == "BE":
        return g
    if scheme == "CN":
        return 0.5 * (1.0 + g)
    # RK4 stages y1..y4 relative to v^{n-1}; weights 1/6, 1/3, 1/3, 1/6
    y2 = 1.0 + 0.5 * mu
    y3 = 1.0 + 0.5 * mu * y2
    y4 = 1.0 + mu * y3
    return (1.0 + 2.0 * y2 + 2.0 * y3 + y4) / 6.0


class UnsteadyAdvectionDiffusion(BlackBoxModel):
    name = "unsteady_ad"
    dim = 2
    n_terms = 3
    n_qoi = 1

    def __init__(self, scheme: str = "CN", n_x: int = 256, dt: float = 1e-5,
                 t_end: float = 1.0, domain: Domain | None = None):
        if scheme not in SCHEMES:
            raise ValueError(f"unknown scheme {scheme!r}; valid: {SCHEMES}")
        if n_x < 4:
            raise ValueError("n_x must be at least 4")
        self.scheme = scheme
        self.n_x = int(n_x)
        self.n_steps = int(round(t_end / dt))
        if self.n_steps < 1 or abs(self.n_steps * dt - t_end) > 1e-9 * t_end:
            raise ValueError(f"t_end={t_end} is not an integer multiple of dt={dt}")
        self.dt = float(dt)
        self.t_end = float(t_end)
        self.domain = domain if domain is not None else hypercube((0.0, 0.0), (TWO_PI, TWO_PI))
        self.x = TWO_PI * np.arange(self.n_x) / self.n_x
        self.k = wavenumbers(self.n_x)
        self.v0_hat = np.fft.fft(np.sin(self.x))

    def __repr__(self):
        return (f"UnsteadyAdvectionDiffusion(scheme={self.scheme!r}, n_x={self.n_x}, "
                f"dt={self.dt!r}, t_end={self.t_end!r})")

    def cache_key(self) -> str:
        return f"{self!r}|domain={self.domain.kind}"

    def gammas(self, Z) -> np.ndarray:
        Z = np.atleast_2d(np.asarray(Z, dtype=float))
        return np.column_stack([np.ones(len(Z)), Z[:, 0], -Z[:, 1]])

    def qoi_source(self, Z) -> np.ndarray:
        return np.zeros((len(np.atleast_2d(Z)), 1))

    def _mu(self, Z):
        ik = 1j * self.k
        return self.dt * (-Z[:, 0:1] * ik[None, :] + Z[:, 1:2] * (ik * ik)[None, :])

    def check_stability(self, Z):
        if self.scheme != "RK4":
            return
        g = np.abs(amplification("RK4", self._mu(Z)))
        bad = np.max(g, axis=1) > 1.0 + 1e-12
        if np.any(bad):
            z = Z[np.argmax(bad)]
            dn = z[1] * self.dt * np.max(self.k ** 2)
            raise ValueError(f"RK4 unstable at z={tuple(z)}: diffusion number {dn:.4g} "
                             f"(real-axis limit {RK4_REAL_LIMIT:.4g}); reduce dt")

    def sample_batch(self, Z) -> tuple[np.ndarray, np.ndarray]:
        """QoI ``(n, 1)`` and terms ``(n, 3, 1)`` for a batch of points."""
        Z = np.atleast_2d(np.asarray(Z, dtype=float))
        if Z.shape[1] != 2:
            raise ValueError(f"expected 2-dimensional points, got {Z.shape[1]}")
        self.check_stability(Z)
        mu = self._mu(Z)
        g = amplification(self.scheme, mu)
        prev = g ** (self.n_steps - 1) * self.v0_hat[None, :]
        cur = g * prev
        ybar = stage_average(self.scheme, mu) * prev
        ik = 1j * self.k[None, :]
        # value at grid index 0 is the mean of the Fourier coefficients
        at0 = lambda c: np.real(np.sum(c, axis=1)) / self.n_x  # noqa: E731
        u = at0(cur)
        t1 = (u - at0(prev)) / self.dt
        t2 = at0(ik * ybar)
        t3 = at0(ik * ik * ybar)
        terms = np.stack([t1, t2, t3], axis=1)[:, :, None]
        if not (np.all(np.isfinite(u)) and np.all(np.isfinite(terms))):
            raise FloatingPointError("non-finite solution values")
        return u[:, None], terms

    def sample(self, z) -> BlackBoxSample:
        z = self.check_point(z)
        u, terms = self.sample_batch(z[None, :])
        return BlackBoxSample(u=u[0], terms=terms[0])

    def qoi_batch(self, Z, chunk: int = 2048) -> np.ndarray:
        Z = np.atleast_2d(np.asarray(Z, dtype=float))
        out = np.empty((len(Z), 1))
        for s in range(0, len(Z), chunk):
            out[s:s + chunk] = self.sample_batch(Z[s:s + chunk])[0]
        return out

    def solve_field(self, z) -> np.ndarray:
        """Full grid solution at ``t_end`` (diagnostics and tests)."""
        z = self.check_point(z)
        self.check_stability(z[None, :])
        g = amplification(self.scheme, self._mu(z[None, :]))[0]
        return np.real(np.fft.ifft(g ** self.n_steps * self.v0_hat))

    @staticmethod
    def exact_qoi(Z) -> np.ndarray:
        """``-exp(-z2) sin(z1)``: the continuous solution at ``x = 2 pi, t = 1``."""
        Z = np.atleast_2d(np.asarray(Z, dtype=float))
        return (-np.exp(-Z[:, 1]) * np.sin(Z[:, 0]))[:, None]
