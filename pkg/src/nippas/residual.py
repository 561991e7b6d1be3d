"""Refinement measures over the parameter space.

All evaluators take an ``(n, d)`` batch and return ``(n,)`` non-negative
values, zero wherever the domain indicator is zero.

``R``      norm of ``sum_l gamma_l(z) * term_l~(z) - Q S(z)``
``R_rho``  density-weighted ``R``
``R_star`` norm of ``Q A(z)^{-1} R_v(z)`` with ``A(z) = sum_l gamma_l(z) L_l``
           and ``R_v`` built from full-space term interpolants
``R_EI``   norm of ``A(z) v~(z) - S(z)`` with ``v~`` the full-solution interpolant
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .distributions import Pdf
from .geometry import Domain
from .surrogate import SurrogateState

KINDS = ("R", "R_rho", "R_star", "R_EI")

# which extra datasets each measure needs the surrogate to carry
FULL_DATA = {"R": None, "R_rho": None, "R_star": "terms", "R_EI": "v"}


@dataclass(frozen=True)
class RefinementMeasure:
    kind: str
    model: object
    domain: Domain
    pdf: Pdf | None = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown measure {self.kind!r}; valid: {KINDS}")
        if self.kind == "R_rho" and self.pdf is None:
            raise ValueError("measure R_rho needs a pdf")
        if self.kind in ("R_star", "R_EI") and not getattr(self.model, "supports_full_space", False):
            raise ValueError(f"measure {self.kind} needs a linear model with explicit operators")
        if self.domain.dim != self.model.dim:
            raise ValueError(f"domain dimension {self.domain.dim} != model dimension {self.model.dim}")

    @property
    def full_data(self) -> str | None:
        return FULL_DATA[self.kind]

    def __call__(self, state: SurrogateState, Z) -> np.ndarray:
        return _EVAL[self.kind](self, state, Z)


def _prepare(measure: RefinementMeasure, state: SurrogateState, Z):
    if not len(state):
        raise ValueError("surrogate has no nodes")
    Z = np.atleast_2d(np.asarray(Z, dtype=float))
    if Z.shape[1] != measure.domain.dim:
        raise ValueError(f"points of dimension {Z.shape[1]} for a {measure.domain.dim}-d domain")
    box = measure.domain.box
    inside = box.contains(Z)
    if not np.all(inside):
        raise ValueError(f"point {tuple(Z[np.argmin(inside)])} outside the bounding box")
    return Z, measure.domain.mask(Z)


def _check_kind(measure, *kinds):
    if measure.kind not in kinds:
        raise ValueError(f"measure of kind {measure.kind!r} evaluated as {kinds[0]!r}")


def qoi_residual(model, state: SurrogateState, Z) -> np.ndarray:
    """``(n, n_qoi)`` vector residual ``sum_l gamma_l term_l~ - Q S``."""
    T = state.eval_terms(Z)
    return np.einsum("nl,nlk->nk", model.gammas(Z), T) - model.qoi_source(Z)


def _R_values(measure, state, Z):
    Z, m = _prepare(measure, state, Z)
    out = np.zeros(len(Z))
    if np.any(m):
        out[m] = np.linalg.norm(qoi_residual(measure.model, state, Z[m]), axis=1)
    return Z, m, out


def eval_R(measure: RefinementMeasure, state: SurrogateState, Z) -> np.ndarray:
    _check_kind(measure, "R", "R_rho")
    return _R_values(measure, state, Z)[2]


def eval_R_rho(measure: RefinementMeasure, state: SurrogateState, Z) -> np.ndarray:
    _check_kind(measure, "R_rho")
    if measure.pdf is None:
        raise ValueError("measure R_rho needs a pdf")
    Z, m, r = _R_values(measure, state, Z)
    if np.any(m):
        r[m] *= measure.pdf.density(Z[m])
    return r


def full_residual(model, state: SurrogateState, z) -> np.ndarray:
    """Full-space ``R_v(z) = sum_l gamma_l full_term_l~(z) - S(z)`` at one point."""
    z = np.asarray(z, dtype=float).ravel()
    T = state.eval_terms(z[None, :], prefix="full_term")[0]
    return model.gammas(z[None, :])[0] @ T - model.full_source(z)


def eval_R_star(measure: RefinementMeasure, state: SurrogateState, Z) -> np.ndarray:
    _check_kind(measure, "R_star")
    Z, m = _prepare(measure, state, Z)
    model = measure.model
    out = np.zeros(len(Z))
    idx = np.flatnonzero(m)
    if not len(idx):
        return out
    V = state.vandermonde(Z[idx])
    T = state.eval_terms(None, prefix="full_term", V=V)
    G = model.gammas(Z[idx])
    for j, i in enumerate(idx):
        Rv = G[j] @ T[j] - model.full_source(Z[i])
        x = model.solve_operator(Z[i], Rv)
        out[i] = np.linalg.norm(model.project(x))
    return out


def eval_R_EI(measure: RefinementMeasure, state: SurrogateState, Z) -> np.ndarray:
    _check_kind(measure, "R_EI")
    Z, m = _prepare(measure, state, Z)
    model = measure.model
    out = np.zeros(len(Z))
    idx = np.flatnonzero(m)
    if not len(idx):
        return out
    Vt = state.eval("v", Z[idx])                       # (n, n_pde)
    G = model.gammas(Z[idx])
    acc = np.zeros_like(Vt)
    for l, L in enumerate(model.operators):
        acc += G[:, l:l + 1] * (L @ Vt.T).T
    for j, i in enumerate(idx):
        acc[j] -= model.full_source(Z[i])
    out[idx] = np.linalg.norm(acc, axis=1)
    return out


_EVAL = {"R": eval_R, "R_rho": eval_R_rho, "R_star": eval_R_star, "R_EI": eval_R_EI}


def theorem_identity(model, state: SurrogateState, z) -> tuple[np.ndarray, np.ndarray]:
    """``(Q A(z)^{-1} R_v(z), u~(z) - u(z))`` for a linear model; the two agree
    in exact arithmetic when the surrogate carries full-space term data."""
    z = np.asarray(z, dtype=float).ravel()
    lhs = model.project(model.solve_operator(z, full_residual(model, state, z)))
    rhs = state.eval_qoi(z[None, :])[0] - model.sample(z).u
    return lhs, rhs


def error_bound(model, state: SurrogateState, z) -> float:
    """``||Q|| ||A(z)^{-1}|| ||R_v(z)||``."""
    z = np.asarray(z, dtype=float).ravel()
    return (model.q_norm * model.inverse_operator_norm(z)
            * float(np.linalg.norm(full_residual(model, state, z))))
