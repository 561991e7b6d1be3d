"""Brute-force cross-checks, runnable from the command line.

Each suite returns a list of :class:`Check` rows (name, observed value,
tolerance, passed).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .analysis import gauss_legendre
from .basis import BasisSpec, graded_lex_indices
from .driver import RunConfig, run
from .geometry import BoundingBox
from .models import SteadyAdvectionDiffusion
from .optimizer import SwarmConfig, maximize
from .pinv import PinvState, direct_pinv, grow_square, penrose_residuals
from .residual import error_bound, theorem_identity


@dataclass
class Check:
    name: str
    value: float
    tol: float
    passed: bool

    @classmethod
    def below(cls, name, value, tol):
        return cls(name, float(value), float(tol), bool(value <= tol))


def grow_vandermonde(box: BoundingBox, nodes, check: float | None = None) -> tuple[PinvState, list]:
    """Square Vandermonde growth by column-then-row Greville appends (no dense
    fallback unless ``check`` is given).

    Returns the final state and, per step, ``(cond(A), |G - A^+|_max / |A^+|_2,
    max Penrose residual, rebuilt)``.
    """
    nodes = np.atleast_2d(nodes)
    idx = graded_lex_indices(box.dim, len(nodes))
    state = PinvState.empty()
    steps = []
    for n in range(1, len(nodes) + 1):
        spec = BasisSpec(box, idx[:n])
        col = spec.column(n - 1, nodes[:n - 1]) if n > 1 else None
        state, rebuilt = grow_square(state, col, spec.vandermonde(nodes[n - 1:n])[0], check=check, seed=n)
        G0 = direct_pinv(state.A)
        dev = np.max(np.abs(state.G - G0)) / np.linalg.norm(G0, 2)
        pen = max(penrose_residuals(state.A, state.G).values())
        steps.append((float(np.linalg.cond(state.A)), float(dev), float(pen), bool(rebuilt)))
    return state, steps


def greville_checks(label: str, box: BoundingBox, nodes, check: float | None = None) -> list[Check]:
    _, steps = grow_vandermonde(box, nodes, check)
    if check is not None:
        label = f"{label} (guarded, {sum(s[3] for s in steps)} dense rebuilds)"
    conds = np.array([s[0] for s in steps])
    devs = np.array([s[1] for s in steps])
    well = conds < 1e8
    return [
        Check.below(f"greville {label}: max |G - pinv|/|pinv| over {int(well.sum())}/{len(steps)} "
                    f"steps with cond < 1e8", devs[well].max() if well.any() else 0.0, 1e-9),
        Check.below(f"greville {label}: Penrose max over all {len(steps)} steps",
                    max(s[2] for s in steps), 1e-8),
    ]


def greville_suite(seed: int = 0, n_nodes: int = 40) -> list[Check]:
    from .models import UnsteadyAdvectionDiffusion

    out = []
    # node sets produced by the adaptive loop itself
    cases = {
        "1d": SteadyAdvectionDiffusion("Re1", 200, "mid"),
        "2d": UnsteadyAdvectionDiffusion("CN", 64, 1e-3),
    }
    for label, model in cases.items():
        r = run(RunConfig(model, "R", epsilon=1e-300, max_nodes=n_nodes, seed=seed))
        out += greville_checks(label, model.domain.box, r.samples.nodes)
    rng = np.random.default_rng(seed)
    A = rng.standard_normal((10, 10))
    st = PinvState.from_matrix(A)
    dev = np.max(np.abs(st.G - direct_pinv(A))) / np.linalg.norm(direct_pinv(A), 2)
    out.append(Check.below("greville random 10x10 column build", dev, 1e-10))
    return out


def theorem1_suite(seed: int = 0, n_points: int = 50) -> list[Check]:
    model = SteadyAdvectionDiffusion("Re1", 200, "mid")
    r = run(RunConfig(model, "R_star", epsilon=1e-300, max_nodes=10, seed=seed))
    rng = np.random.default_rng(seed + 1)
    worst_id, worst_bound = 0.0, -np.inf
    for z in rng.random((n_points, 1)):
        lhs, rhs = theorem_identity(model, r.state, z)
        u = model.sample(z).u
        worst_id = max(worst_id, float(np.max(np.abs(lhs - rhs)) / (1.0 + np.linalg.norm(u))))
        worst_bound = max(worst_bound, float(np.linalg.norm(rhs) - error_bound(model, r.state, z) - 1e-8))
    return [Check.below("theorem1 identity, scaled max deviation", worst_id, 1e-8),
            Check.below("error bound, max(lhs - rhs - 1e-8)", max(worst_bound, 0.0), 0.0)]


def quadrature_suite() -> list[Check]:
    out = []
    for n in (1, 2, 5, 20, 100):
        x, w = gauss_legendre(n)
        worst = 0.0
        for k in range(0, 2 * n):
            exact = 0.0 if k % 2 else 2.0 / (k + 1)
            got = float(w @ x ** k)
            err = abs(got - exact) / (abs(exact) if exact else 1.0)
            worst = max(worst, err)
        out.append(Check.below(f"gauss-legendre n={n}: monomials up to degree {2 * n - 1}", worst, 1e-12))
    return out


def rastrigin_objective(Z):
    """Negated, shifted 2D Rastrigin on [0, 2pi]^2 with the optimum at (pi, pi)."""
    Y = np.atleast_2d(Z) - np.pi
    val = 20.0 + np.sum(Y * Y - 10.0 * np.cos(2.0 * np.pi * Y), axis=1)
    return np.maximum(0.0, 80.0 + 4.0 * np.pi ** 2 - val)


def pso_suite(n_runs: int = 100, grid: int = 1000) -> list[Check]:
    box = BoundingBox((0.0, 0.0), (2 * np.pi, 2 * np.pi))
    t = np.linspace(0.0, 2 * np.pi, grid)
    T1, T2 = np.meshgrid(t, t, indexing="ij")
    G = np.column_stack([T1.ravel(), T2.ravel()])
    fg = rastrigin_objective(G)
    best = float(fg.max())
    hits = 0
    for s in range(n_runs):
        res = maximize(rastrigin_objective, box, SwarmConfig(n_particles=200, seed=s))
        hits += abs(res.f_max - best) <= 1e-2 or res.f_max >= best
    return [Check(f"pso hits grid max within 1e-2 ({n_runs} seeds)", hits, 0.95 * n_runs,
                  hits >= 0.95 * n_runs)]


SUITES = {"greville": greville_suite, "theorem1": theorem1_suite,
          "quadrature": quadrature_suite, "pso": pso_suite}
