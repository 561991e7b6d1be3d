"""Random-space geometry: bounding boxes, indicator domains and the simplex chart.

Every domain is an axis-aligned :class:`BoundingBox` plus an indicator
predicate. Boundary points count as inside. All objects are frozen.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

TWO_PI = 2.0 * np.pi
SQRT3 = np.sqrt(3.0)

DOMAIN_KINDS = ("hypercube", "triangle", "disc", "holes", "simplex2d", "custom")


@dataclass(frozen=True)
class BoundingBox:
    lo: tuple
    hi: tuple

    def __post_init__(self):
        lo = tuple(float(v) for v in np.atleast_1d(self.lo))
        hi = tuple(float(v) for v in np.atleast_1d(self.hi))
        if len(lo) == 0 or len(lo) != len(hi):
            raise ValueError(f"bounds must be non-empty and equal length, got {lo} / {hi}")
        if any(a >= b for a, b in zip(lo, hi)):
            raise ValueError(f"need lo < hi per coordinate, got {lo} / {hi}")
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)

    @property
    def dim(self) -> int:
        return len(self.lo)

    @property
    def lo_array(self) -> np.ndarray:
        return np.array(self.lo)

    @property
    def hi_array(self) -> np.ndarray:
        return np.array(self.hi)

    @property
    def width(self) -> np.ndarray:
        return self.hi_array - self.lo_array

    @property
    def volume(self) -> float:
        return float(np.prod(self.width))

    @property
    def diameter(self) -> float:
        return float(np.linalg.norm(self.width))

    def contains(self, z) -> np.ndarray | bool:
        z = np.asarray(z, dtype=float)
        inside = np.all((z >= self.lo_array) & (z <= self.hi_array), axis=-1)
        return bool(inside) if inside.ndim == 0 else inside

    def uniform(self, rng: np.random.Generator, n: int) -> np.ndarray:
        return rng.uniform(self.lo_array, self.hi_array, size=(n, self.dim))


def _box_indicator(box: BoundingBox) -> Callable[[np.ndarray], np.ndarray]:
    return lambda Z: box.contains(Z)


@dataclass(frozen=True)
class Domain:
    """Bounding box plus an indicator restricting it to the admissible set.

    ``indicator`` maps an ``(n, d)`` array to a boolean array of length ``n``;
    it is only consulted for points inside the box.
    """

    box: BoundingBox
    indicator: Callable[[np.ndarray], np.ndarray] = field(default=None, compare=False)
    kind: str = "hypercube"

    def __post_init__(self):
        if self.kind not in DOMAIN_KINDS:
            raise ValueError(f"unknown domain kind {self.kind!r}; valid: {DOMAIN_KINDS}")
        if self.indicator is None:
            object.__setattr__(self, "indicator", _box_indicator(self.box))

    @property
    def dim(self) -> int:
        return self.box.dim

    def mask(self, Z) -> np.ndarray:
        """Vectorised indicator for an ``(n, d)`` batch."""
        Z = np.atleast_2d(np.asarray(Z, dtype=float))
        if Z.shape[1] != self.dim:
            raise ValueError(f"points have dimension {Z.shape[1]}, domain has {self.dim}")
        inside = self.box.contains(Z)
        out = np.zeros(len(Z), dtype=bool)
        if inside.any():
            out[inside] = np.asarray(self.indicator(Z[inside]), dtype=bool)
        return out

    def uniform(self, rng: np.random.Generator, n: int, *, batch: int = 4096,
                min_rate: float = 1e-6) -> np.ndarray:
        """Uniform draws on the domain by rejection from the bounding box."""
        out = []
        have = tried = 0
        while have < n:
            cand = self.box.uniform(rng, max(batch, 2 * (n - have)))
            keep = cand[self.mask(cand)]
            tried += len(cand)
            out.append(keep)
            have += len(keep)
            if tried >= 10 / min_rate and have / tried < min_rate:
                raise RuntimeError(
                    f"rejection acceptance rate {have / tried:.2e} below {min_rate:g}; "
                    "domain is degenerate")
        return np.concatenate(out)[:n]


def contains(domain: Domain, z) -> bool:
    z = np.asarray(z, dtype=float)
    if z.ndim != 1 or z.shape[0] != domain.dim:
        raise ValueError(f"point of shape {z.shape} does not match domain dimension {domain.dim}")
    return bool(domain.mask(z[None, :])[0])


# --- concrete domains --------------------------------------------------------

def hypercube(lo, hi) -> Domain:
    return Domain(BoundingBox(lo, hi), kind="hypercube")


def _triangle_ind(Z):
    z1, z2 = Z[:, 0], Z[:, 1]
    return (z2 >= 0) & (z2 - SQRT3 * z1 <= 0) & (SQRT3 * z1 + z2 <= TWO_PI * SQRT3)


def triangle_domain() -> Domain:
    """Equilateral triangle with corners (0,0), (2pi,0), (pi, pi*sqrt(3))."""
    return Domain(BoundingBox((0.0, 0.0), (TWO_PI, np.pi * SQRT3)), _triangle_ind, "triangle")


def _disc_ind(Z):
    return (Z[:, 0] - np.pi) ** 2 + (Z[:, 1] - np.pi) ** 2 <= np.pi ** 2


def disc_domain() -> Domain:
    return Domain(BoundingBox((0.0, 0.0), (TWO_PI, TWO_PI)), _disc_ind, "disc")


HOLES = (
    ((np.pi, np.pi), np.pi / 2),
    ((np.pi / 3, np.pi / 3), np.pi / 5),
    ((5 * np.pi / 3, 5 * np.pi / 3), np.pi / 3),
)


def _holes_ind(Z):
    keep = np.ones(len(Z), dtype=bool)
    for (c1, c2), r in HOLES:
        keep &= ~((Z[:, 0] - c1) ** 2 + (Z[:, 1] - c2) ** 2 <= r ** 2)
    return keep


def holes_domain() -> Domain:
    return Domain(BoundingBox((0.0, 0.0), (TWO_PI, TWO_PI)), _holes_ind, "holes")


def holes_indicator(z) -> bool:
    """Membership of the square ``[0, 2pi]^2`` with three closed discs removed."""
    z = np.asarray(z, dtype=float)
    if z.shape != (2,):
        raise ValueError("holes_indicator expects a point in R^2")
    return contains(holes_domain(), z)


# --- simplex chart -------------------------------------------------------------

SWE_CORNERS = ((12.0, 0.5, -0.5), (8.0, 1.5, -0.5), (8.0, 0.5, 0.5))


@dataclass(frozen=True)
class SimplexChart:
    """Affine chart from the unit triangle ``{s1, s2 >= 0, s1 + s2 <= 1}`` to a
    triangle in R^3: ``s1*c1 + s2*c2 + (1 - s1 - s2)*c3``."""

    corners: tuple = SWE_CORNERS

    def __post_init__(self):
        c = np.asarray(self.corners, dtype=float)
        if c.shape != (3, 3):
            raise ValueError("SimplexChart needs three corners in R^3")
        object.__setattr__(self, "corners", tuple(map(tuple, c)))

    @property
    def corner_array(self) -> np.ndarray:
        return np.array(self.corners)

    def barycentric(self, S) -> np.ndarray:
        S = np.atleast_2d(np.asarray(S, dtype=float))
        return np.column_stack([S[:, 0], S[:, 1], 1.0 - S[:, 0] - S[:, 1]])

    def map(self, S) -> np.ndarray:
        """Unchecked affine map of an ``(n, 2)`` batch."""
        return self.barycentric(S) @ self.corner_array

    @property
    def area_scale(self) -> float:
        """Ratio of the image triangle's area to the unit triangle's area."""
        c = self.corner_array
        return float(np.linalg.norm(np.cross(c[0] - c[2], c[1] - c[2])))

    def plane(self) -> tuple[np.ndarray, float]:
        """Unit normal ``n`` and offset ``k`` with ``n . x = k`` on the image."""
        c = self.corner_array
        n = np.cross(c[0] - c[2], c[1] - c[2])
        n /= np.linalg.norm(n)
        return n, float(n @ c[2])


def _simplex_ind(Z):
    return (Z[:, 0] >= 0) & (Z[:, 1] >= 0) & (Z[:, 0] + Z[:, 1] <= 1.0)


def simplex_domain() -> Domain:
    """The unit triangle in chart coordinates, boxed by ``[0, 1]^2``."""
    return Domain(BoundingBox((0.0, 0.0), (1.0, 1.0)), _simplex_ind, "simplex2d")


def chart_to_ambient(chart: SimplexChart, s) -> np.ndarray:
    s = np.asarray(s, dtype=float)
    if s.shape != (2,):
        raise ValueError("chart coordinates must be a pair (s1, s2)")
    if s[0] < 0 or s[1] < 0 or s[0] + s[1] > 1.0:
        raise ValueError(f"chart point {tuple(s)} outside the unit triangle")
    return chart.map(s[None, :])[0]


def make_domain(kind: str, lo=None, hi=None) -> Domain:
    """Factory used by the config layer."""
    if kind == "hypercube":
        if lo is None or hi is None:
            raise ValueError("hypercube domain needs lo and hi")
        return hypercube(lo, hi)
    factories = {"triangle": triangle_domain, "disc": disc_domain,
                 "holes": holes_domain, "simplex2d": simplex_domain}
    if kind not in factories:
        raise ValueError(f"unknown domain kind {kind!r}; valid: {sorted(factories) + ['hypercube']}")
    return factories[kind]()
