"""Input probability densities on the random space.

Three families: uniform on a :class:`~nippas.geometry.Domain`, a per-axis beta
product on a box, and a Dirichlet law expressed in simplex-chart coordinates.
Densities are vectorised over ``(n, d)`` batches and return 0 off the support.
Sampling always takes an explicit ``numpy.random.Generator``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np
from scipy.special import betaln, gammaln

from .geometry import (TWO_PI, BoundingBox, Domain, SimplexChart, hypercube,
                       simplex_domain)

# exact areas of the built-in non-hypercube domains
_DOMAIN_VOLUME = {
    "triangle": np.sqrt(3.0) * np.pi ** 2,
    "disc": np.pi ** 3,
    "holes": 4 * np.pi ** 2 - np.pi ** 3 * (1 / 4 + 1 / 25 + 1 / 9),
    "simplex2d": 0.5,
}


def domain_volume(domain: Domain, *, rng=None, n_mc: int = 10 ** 6) -> float:
    if domain.kind == "hypercube":
        return domain.box.volume
    if domain.kind in _DOMAIN_VOLUME:
        return float(_DOMAIN_VOLUME[domain.kind])
    rng = rng or np.random.default_rng(0)
    return domain.box.volume * float(domain.mask(domain.box.uniform(rng, n_mc)).mean())


class Pdf:
    """Common surface of the densities; subclasses fill in the maths."""

    kind: str
    support: Domain

    @property
    def dim(self) -> int:
        return self.support.dim

    def density(self, Z) -> np.ndarray:
        raise NotImplementedError

    def sample_n(self, rng: np.random.Generator, n: int) -> np.ndarray:
        raise NotImplementedError

    def sample(self, rng: np.random.Generator) -> np.ndarray:
        return self.sample_n(rng, 1)[0]

    def _prepare(self, Z):
        Z = np.atleast_2d(np.asarray(Z, dtype=float))
        if Z.shape[1] != self.dim:
            raise ValueError(f"points have dimension {Z.shape[1]}, pdf has {self.dim}")
        return Z


@dataclass(frozen=True, eq=False)
class Uniform(Pdf):
    support: Domain
    kind: str = "uniform"

    def __post_init__(self):
        object.__setattr__(self, "_height", 1.0 / domain_volume(self.support))

    def density(self, Z) -> np.ndarray:
        Z = self._prepare(Z)
        return np.where(self.support.mask(Z), self._height, 0.0)

    def sample_n(self, rng, n):
        return self.support.uniform(rng, n)


@dataclass(frozen=True, eq=False)
class BetaProduct(Pdf):
    """Independent per-axis densities ``c_i * s^a_i * (1 - s)^b_i`` with
    ``s = (z - lo) / width``.

    The exponents are used as given (no ``-1`` shift); ``c_i`` absorbs both
    the beta-function normalisation and the box-width Jacobian.
    """

    alpha: tuple
    beta: tuple
    box: BoundingBox = None
    kind: str = "beta_product"

    def __post_init__(self):
        a = tuple(float(v) for v in np.atleast_1d(self.alpha))
        b = tuple(float(v) for v in np.atleast_1d(self.beta))
        if len(a) != len(b):
            raise ValueError("alpha and beta need the same length")
        if any(v <= -1 for v in a + b):
            raise ValueError(f"beta exponents must exceed -1, got alpha={a}, beta={b}")
        box = self.box or BoundingBox((0.0,) * len(a), (TWO_PI,) * len(a))
        if box.dim != len(a):
            raise ValueError("box dimension does not match the number of shape parameters")
        object.__setattr__(self, "alpha", a)
        object.__setattr__(self, "beta", b)
        object.__setattr__(self, "box", box)
        object.__setattr__(self, "support", hypercube(box.lo, box.hi))
        a_, b_ = np.array(a), np.array(b)
        log_c = -betaln(a_ + 1, b_ + 1) - np.log(box.width)
        object.__setattr__(self, "_log_c", log_c)

    def density(self, Z) -> np.ndarray:
        Z = self._prepare(Z)
        S = (Z - self.box.lo_array) / self.box.width
        inside = np.all((S >= 0) & (S <= 1), axis=1)
        S = np.clip(S, 0.0, 1.0)
        a, b = np.array(self.alpha), np.array(self.beta)
        with np.errstate(divide="ignore"):
            per_axis = np.exp(self._log_c) * S ** a * (1 - S) ** b
        return np.where(inside, np.prod(per_axis, axis=1), 0.0)

    def sample_n(self, rng, n):
        a, b = np.array(self.alpha), np.array(self.beta)
        S = rng.beta(a + 1, b + 1, size=(n, len(a)))
        return self.box.lo_array + S * self.box.width


@dataclass(frozen=True, eq=False)
class Dirichlet(Pdf):
    """Dirichlet law on a triangle, parametrised by the chart ``(s1, s2)``.

    ``s1, s2`` are the first two barycentric coordinates; :meth:`density` is
    the unit-simplex density, which integrates to one over the chart triangle.
    Use :meth:`ambient_density` for the density per unit area of the image
    triangle in R^3.
    """

    alpha: tuple
    chart: SimplexChart = None
    kind: str = "dirichlet"

    def __post_init__(self):
        a = tuple(float(v) for v in np.atleast_1d(self.alpha))
        if len(a) != 3 or any(v <= 0 for v in a):
            raise ValueError(f"Dirichlet needs three positive shape parameters, got {a}")
        object.__setattr__(self, "alpha", a)
        object.__setattr__(self, "chart", self.chart or SimplexChart())
        object.__setattr__(self, "support", simplex_domain())
        log_norm = gammaln(sum(a)) - sum(gammaln(v) for v in a)
        object.__setattr__(self, "_log_norm", float(log_norm))

    def density(self, Z) -> np.ndarray:
        Z = self._prepare(Z)
        inside = self.support.mask(Z)
        lam = np.clip(self.chart.barycentric(Z), 0.0, 1.0)
        a = np.array(self.alpha)
        with np.errstate(divide="ignore"):
            val = np.exp(self._log_norm) * np.prod(lam ** (a - 1), axis=1)
        return np.where(inside, val, 0.0)

    def ambient_density(self, Z) -> np.ndarray:
        return self.density(Z) / self.chart.area_scale

    def sample_n(self, rng, n):
        g = rng.standard_gamma(np.array(self.alpha), size=(n, 3))
        lam = g / g.sum(axis=1, keepdims=True)
        return lam[:, :2]


def density(pdf: Pdf, z) -> float:
    return float(pdf.density(np.asarray(z, dtype=float)[None, :])[0])


def sample(pdf: Pdf, seed) -> np.ndarray:
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    return pdf.sample(rng)


def pdf_grid_625(box: BoundingBox | None = None) -> list[BetaProduct]:
    """All 2D beta products with ``alpha_i, beta_i`` in ``{1, ..., 5}``.

    Ordered lexicographically in ``(alpha1, alpha2, beta1, beta2)``.
    """
    out = []
    for a1, a2, b1, b2 in itertools.product(range(1, 6), repeat=4):
        out.append(BetaProduct((a1, a2), (b1, b2), box))
    return out


def make_pdf(kind: str, *, domain: Domain, alpha=None, beta=None) -> Pdf:
    if kind == "uniform":
        return Uniform(domain)
    if kind == "beta_product":
        return BetaProduct(alpha, beta, domain.box)
    if kind == "dirichlet":
        return Dirichlet(alpha)
    raise ValueError(f"unknown pdf kind {kind!r}; valid: uniform, beta_product, dirichlet")
