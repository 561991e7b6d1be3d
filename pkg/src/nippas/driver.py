"""The adaptive refinement loop.

1. Draw one node from the pdf (uniform over the domain without one) and sample.
2. Repeat: maximise the refinement measure by PSO; stop if the maximum is
   below ``epsilon`` or the node budget is spent; otherwise sample the black
   box at the maximiser and append it.
3. Return the final surrogate, its samples and the convergence history.
"""

from __future__ import annotations

import logging
import time
from dataclasses import dataclass, field, replace

import numpy as np

from .distributions import Pdf
from .geometry import BoundingBox, Domain
from .optimizer import SwarmConfig, maximize
from .residual import RefinementMeasure
from .surrogate import SampleSet, SurrogateState, sample_datasets

log = logging.getLogger(__name__)

STATUSES = ("converged", "budget", "stalled", "failed")


@dataclass
class RunConfig:
    model: object
    measure: str = "R"
    pdf: Pdf | None = None
    domain: Domain | None = None
    epsilon: float | None = None      # default 1e-8 * (1 + max |u| observed)
    max_nodes: int = 50
    delta_dup: float | None = None    # default 1e-8 * diam(box)
    swarm: SwarmConfig = field(default_factory=SwarmConfig)
    seed: int = 0
    tracker: object = None            # analysis.ErrorTracker or None

    def __post_init__(self):
        if self.domain is None:
            self.domain = self.model.domain
        if self.epsilon is not None and not self.epsilon > 0:
            raise ValueError(f"epsilon must be > 0, got {self.epsilon}")
        if self.max_nodes < 1:
            raise ValueError(f"max_nodes must be >= 1, got {self.max_nodes}")
        if self.delta_dup is not None and not self.delta_dup > 0:
            raise ValueError(f"delta_dup must be > 0, got {self.delta_dup}")
        if self.domain.dim != self.model.dim:
            raise ValueError(f"domain dimension {self.domain.dim} != model dimension {self.model.dim}")

    @property
    def dup_distance(self) -> float:
        return self.delta_dup if self.delta_dup is not None else 1e-8 * self.domain.box.diameter


@dataclass
class ConvergenceRecord:
    iter: int
    n_nodes: int
    residual_max: float
    z_new: np.ndarray | None
    errors: dict = field(default_factory=dict)
    ill_conditioned: bool = False

    def as_dict(self) -> dict:
        d = {"iter": self.iter, "n_nodes": self.n_nodes, "residual_max": self.residual_max,
             "ill_conditioned": int(self.ill_conditioned)}
        d.update(self.errors)
        return d


@dataclass
class RunResult:
    state: SurrogateState
    samples: SampleSet
    history: list
    status: str
    message: str = ""
    elapsed: float = 0.0

    def __iter__(self):
        return iter((self.state, self.samples, self.history))


def initial_node(config: RunConfig) -> np.ndarray:
    rng = np.random.default_rng(config.seed)
    if config.pdf is not None:
        for _ in range(10 ** 4):
            z = config.pdf.sample(rng)
            if config.domain.mask(z[None, :])[0]:
                return z
        # pdf carries no mass on D; R_rho is then zero everywhere
        log.warning("pdf draws never landed inside the domain; initial node drawn uniformly")
    return config.domain.uniform(rng, 1)[0]


def run(config: RunConfig) -> RunResult:
    t0 = time.perf_counter()
    model = config.model
    measure = RefinementMeasure(config.measure, model, config.domain, config.pdf)
    box: BoundingBox = config.domain.box
    state = SurrogateState(box, model.n_terms)
    samples = SampleSet(box.dim)
    history: list[ConvergenceRecord] = []
    swarm = config.swarm
    u_scale = 0.0

    def add(z):
        nonlocal u_scale
        s = model.sample(z)
        state.add_node(samples, z, sample_datasets(s, model.n_terms, measure.full_data),
                       delta_dup=config.dup_distance)
        u_scale = max(u_scale, float(np.max(np.abs(s.u))))

    def finish(status, message=""):
        log.info("run finished: %s after %d nodes %s", status, len(samples), message)
        return RunResult(state, samples, history, status, message, time.perf_counter() - t0)

    try:
        add(initial_node(config))
    except Exception as exc:  # black-box failure at the first node
        return finish("failed", f"{type(exc).__name__}: {exc}")

    it = 0
    while True:
        eps = config.epsilon if config.epsilon is not None else 1e-8 * (1.0 + u_scale)
        cfg = replace(swarm, seed=swarm.seed + 7919 * it + config.seed)
        res = maximize(lambda X: measure(state, X), box, cfg)
        rec = ConvergenceRecord(it, len(samples), float(res.f_max), None,
                                ill_conditioned=state.ill_conditioned)
        if config.tracker is not None:
            rec.errors = config.tracker.evaluate(state)
        history.append(rec)
        if res.f_max < eps:
            return finish("converged")
        if len(samples) >= config.max_nodes:
            return finish("budget")
        z = np.asarray(res.z_max, dtype=float)
        dist = float(np.min(np.linalg.norm(samples.nodes - z, axis=1)))
        rec.z_new = z.copy()
        if dist <= config.dup_distance:
            return finish("stalled", f"maximiser {tuple(z)} within {dist:.3g} of an existing node")
        try:
            add(z)
        except Exception as exc:
            return finish("failed", f"{type(exc).__name__} at z={tuple(z)}: {exc}")
        it += 1


def boundary_clustering_stat(samples, box: BoundingBox, fraction: float) -> int:
    """Number of nodes within ``fraction`` of the box width of either edge on
    some axis."""
    Z = samples.nodes if isinstance(samples, SampleSet) else np.atleast_2d(np.asarray(samples, dtype=float))
    if Z.size == 0:
        return 0
    if Z.shape[1] != box.dim:
        Z = Z.reshape(-1, box.dim)
    lo, hi, w = box.lo_array, box.hi_array, box.width
    near = (Z - lo <= fraction * w) | (hi - Z <= fraction * w)
    return int(np.count_nonzero(np.any(near, axis=1)))


def boundary_counts(samples, box: BoundingBox, fraction: float) -> tuple[np.ndarray, np.ndarray]:
    """Per-axis counts of nodes near the lower and the upper edge."""
    Z = samples.nodes if isinstance(samples, SampleSet) else np.atleast_2d(np.asarray(samples, dtype=float))
    lo, hi, w = box.lo_array, box.hi_array, box.width
    return (np.sum(Z - lo <= fraction * w, axis=0), np.sum(hi - Z <= fraction * w, axis=0))
