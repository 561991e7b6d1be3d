"""Particle swarm maximisation over a bounding box.

Standard constriction-coefficient PSO. The objective is called on the whole
swarm at once: ``f(X)`` with ``X`` of shape ``(n_particles, d)`` returns
``(n_particles,)``.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .geometry import BoundingBox


@dataclass(frozen=True)
class SwarmConfig:
    n_particles: int | None = None   # default 100 * d
    max_iters: int | None = None     # default 200 * d
    inertia: float = 0.729
    c1: float = 1.49445
    c2: float = 1.49445
    seed: int = 0
    stall_iters: int | None = None   # default 20 * d
    stall_tol: float = 1e-12

    def resolved(self, dim: int) -> "SwarmConfig":
        cfg = replace(
            self,
            n_particles=self.n_particles if self.n_particles is not None else 100 * dim,
            max_iters=self.max_iters if self.max_iters is not None else 200 * dim,
            stall_iters=self.stall_iters if self.stall_iters is not None else 20 * dim,
        )
        if cfg.n_particles < 2:
            raise ValueError("n_particles must be at least 2")
        if cfg.max_iters < 0 or cfg.stall_iters < 1:
            raise ValueError("max_iters must be >= 0 and stall_iters >= 1")
        return cfg


@dataclass(frozen=True)
class SwarmResult:
    z_max: np.ndarray
    f_max: float
    evals: int
    iterations: int

    def __iter__(self):
        return iter((self.z_max, self.f_max, self.evals))


def _evaluate(f, X) -> np.ndarray:
    vals = np.asarray(f(X), dtype=float).reshape(len(X))
    bad = ~np.isfinite(vals)
    if np.any(bad):
        z = X[np.argmax(bad)]
        raise FloatingPointError(f"objective returned {vals[np.argmax(bad)]} at z={tuple(z)}")
    return vals


def maximize(f, box: BoundingBox, cfg: SwarmConfig | None = None) -> SwarmResult:
    cfg = (cfg or SwarmConfig()).resolved(box.dim)
    rng = np.random.default_rng(cfg.seed)
    lo, hi, width = box.lo_array, box.hi_array, box.width
    n, d = cfg.n_particles, box.dim

    X = lo + rng.random((n, d)) * width
    V = (2.0 * rng.random((n, d)) - 1.0) * width
    fx = _evaluate(f, X)
    evals = n
    P, pval = X.copy(), fx.copy()
    g = int(np.argmax(pval))
    gbest, gval = P[g].copy(), float(pval[g])

    stall = 0
    it = 0
    for it in range(1, cfg.max_iters + 1):
        r1 = rng.random((n, d))
        r2 = rng.random((n, d))
        V = cfg.inertia * V + cfg.c1 * r1 * (P - X) + cfg.c2 * r2 * (gbest - X)
        np.clip(V, -width, width, out=V)
        X = np.clip(X + V, lo, hi)
        fx = _evaluate(f, X)
        evals += n
        better = fx > pval
        P[better] = X[better]
        pval[better] = fx[better]
        g = int(np.argmax(pval))
        if pval[g] > gval:
            gain = pval[g] - gval
            if gain > cfg.stall_tol * max(abs(gval), np.finfo(float).tiny):
                stall = 0
            else:
                stall += 1
            gbest, gval = P[g].copy(), float(pval[g])
        else:
            stall += 1
        if stall >= cfg.stall_iters:
            break
    return SwarmResult(gbest, gval, evals, it)
