"""Black-box PDE adapters."""

from __future__ import annotations

from .base import BlackBoxModel, BlackBoxSample
from .steady_ad import PROFILES, SteadyAdvectionDiffusion
from .swe import ShallowWaterDambreak
from .toy import TOY_FUNCTIONS, AnalyticToy
from .unsteady_ad import SCHEMES, UnsteadyAdvectionDiffusion


def steady_ad(z, profile: str = "Re1", n_pde: int = 999, qoi="mid") -> BlackBoxSample:
    return SteadyAdvectionDiffusion(profile, n_pde, qoi).sample(z)


def unsteady_ad(z, scheme: str = "CN", n_x: int = 256, dt: float = 1e-5) -> BlackBoxSample:
    return UnsteadyAdvectionDiffusion(scheme, n_x, dt).sample(z)


def swe_dambreak(z, n_cells: int = 2000, cfl: float = 0.45) -> BlackBoxSample:
    return ShallowWaterDambreak(n_cells, cfl).sample(z)


def analytic_toy(z, f="linear", domain=None) -> BlackBoxSample:
    return AnalyticToy(f, domain).sample(z)


__all__ = [
    "BlackBoxModel", "BlackBoxSample", "SteadyAdvectionDiffusion", "UnsteadyAdvectionDiffusion",
    "ShallowWaterDambreak", "AnalyticToy", "PROFILES", "SCHEMES", "TOY_FUNCTIONS",
    "steady_ad", "unsteady_ad", "swe_dambreak", "analytic_toy",
]
