"""Adaptive polynomial surrogates of PDE quantities of interest, with node
placement driven by the discrete PDE residual and the input density."""

from __future__ import annotations

from .driver import RunConfig, RunResult, run
from .kernels import BACKEND
from .optimizer import SwarmConfig, maximize
from .residual import RefinementMeasure
from .surrogate import SampleSet, SurrogateState

__version__ = "0.1.0"

__all__ = ["BACKEND", "RefinementMeasure", "RunConfig", "RunResult", "SampleSet",
           "SurrogateState", "SwarmConfig", "maximize", "run", "__version__"]
