"""Closed-form test model: QoI ``f(z)``, one term ``f(z)`` with coefficient 1,
and projected source ``f(z)``, so the residual is the interpolation defect."""

from __future__ import annotations

from typing import Callable

import numpy as np

from ..geometry import Domain, hypercube
from .base import BlackBoxModel, BlackBoxSample

TOY_FUNCTIONS: dict[str, Callable] = {
    "constant": lambda Z: np.full(len(Z), 2.5),
    "linear": lambda Z: Z[:, 0].copy(),
    "product": lambda Z: np.prod(Z, axis=1),
    "shifted_product": lambda Z: 3.0 + np.prod(Z, axis=1),
    "square": lambda Z: Z[:, 0] ** 2,
    "runge": lambda Z: 1.0 / (1.0 + 25.0 * np.sum(Z * Z, axis=1)),
    "zero": lambda Z: np.zeros(len(Z)),
}


class AnalyticToy(BlackBoxModel):
    name = "analytic_toy"
    n_terms = 1
    n_qoi = 1

    def __init__(self, f: Callable | str = "linear", domain: Domain | None = None):
        if isinstance(f, str):
            if f not in TOY_FUNCTIONS:
                raise ValueError(f"unknown toy function {f!r}; valid: {sorted(TOY_FUNCTIONS)}")
            self.f_name, f = f, TOY_FUNCTIONS[f]
        else:
            self.f_name = getattr(f, "__name__", "custom")
        self.f = f
        self.domain = domain if domain is not None else hypercube((0.0,), (1.0,))
        self.dim = self.domain.dim

    def __repr__(self):
        return f"AnalyticToy(f={self.f_name!r}, domain={self.domain.kind}, box={self.domain.box})"

    def _values(self, Z) -> np.ndarray:
        Z = np.atleast_2d(np.asarray(Z, dtype=float))
        return np.asarray(self.f(Z), dtype=float).reshape(len(Z), 1)

    def gammas(self, Z) -> np.ndarray:
        return np.ones((len(np.atleast_2d(Z)), 1))

    def qoi_source(self, Z) -> np.ndarray:
        return self._values(Z)

    def sample(self, z) -> BlackBoxSample:
        z = self.check_point(z)
        u = self._values(z[None, :])[0]
        return BlackBoxSample(u=u, terms=u[None, :])

    def qoi_batch(self, Z) -> np.ndarray:
        return self._values(Z)
