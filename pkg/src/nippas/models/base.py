"""Black-box model contract.

A model maps a parameter point ``z`` to the quantity of interest ``u(z)`` and
to the Q-projected values of every operator term of its discretised equation

    sum_l gamma_l(z) * (L_l v)(z) = S(z),

with the coefficient functions ``gamma_l`` and the projected source ``Q S``
known in closed form. Linear models additionally expose their operators so
that full-space measures can be formed.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..geometry import Domain


@dataclass
class BlackBoxSample:
    u: np.ndarray                        # (n_qoi,)
    terms: np.ndarray                    # (n_terms, n_qoi)
    v: np.ndarray | None = None          # full solution, linear models only
    full_terms: np.ndarray | None = None  # (n_terms, n_pde)

    def __post_init__(self):
        self.u = np.atleast_1d(np.asarray(self.u, dtype=float))
        self.terms = np.atleast_2d(np.asarray(self.terms, dtype=float))
        if not (np.all(np.isfinite(self.u)) and np.all(np.isfinite(self.terms))):
            raise FloatingPointError("black box returned non-finite values")


class BlackBoxModel:
    """Base class; subclasses set the attributes below and implement
    :meth:`sample`, :meth:`gammas` and :meth:`qoi_source`."""

    name = "model"
    dim: int
    n_terms: int
    n_qoi: int
    domain: Domain
    linear = False

    def sample(self, z) -> BlackBoxSample:
        raise NotImplementedError

    def gammas(self, Z) -> np.ndarray:
        """``(n, n_terms)`` coefficient values."""
        raise NotImplementedError

    def qoi_source(self, Z) -> np.ndarray:
        """``(n, n_qoi)`` projected source ``Q S(z)``."""
        raise NotImplementedError

    def qoi_batch(self, Z) -> np.ndarray:
        Z = np.atleast_2d(np.asarray(Z, dtype=float))
        return np.array([self.sample(z).u for z in Z]).reshape(len(Z), self.n_qoi)

    def cache_key(self) -> str:
        return repr(self)

    def check_point(self, z) -> np.ndarray:
        z = np.asarray(z, dtype=float).ravel()
        if z.shape[0] != self.dim:
            raise ValueError(f"{self.name}: expected a {self.dim}-dimensional point, got {z.shape[0]}")
        return z

    # ---- linear models only -------------------------------------------------
    @property
    def supports_full_space(self) -> bool:
        return False

    def residual_identity(self, z, sample: BlackBoxSample | None = None) -> float:
        """Max abs of ``sum_l gamma_l (Q L_l v) - Q S`` at ``z``."""
        sample = sample or self.sample(z)
        g = self.gammas(np.atleast_2d(z))[0]
        res = g @ sample.terms - self.qoi_source(np.atleast_2d(z))[0]
        return float(np.max(np.abs(res)))
