from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from nippas.geometry import TWO_PI, BoundingBox
from nippas.optimizer import SwarmConfig, maximize

BOX1 = BoundingBox((0.0,), (1.0,))


def test_quadratic_maximum():
    r = maximize(lambda X: 1.0 - (X[:, 0] - 0.3) ** 2, BOX1)
    assert abs(r.z_max[0] - 0.3) < 1e-3
    assert r.f_max == pytest.approx(1.0, abs=1e-6)


def test_zero_objective():
    z, f, evals = maximize(lambda X: np.zeros(len(X)), BOX1)
    assert f == 0.0 and BOX1.contains(z)


def test_rastrigin_against_grid_scan():
    from nippas.oracles import pso_suite
    checks = pso_suite(n_runs=100, grid=1000)
    assert all(c.passed for c in checks), checks


def test_defaults_scale_with_dimension():
    cfg = SwarmConfig().resolved(2)
    assert (cfg.n_particles, cfg.max_iters, cfg.stall_iters) == (200, 400, 40)
    with pytest.raises(ValueError):
        SwarmConfig(n_particles=1).resolved(1)


def test_non_finite_objective_names_point():
    with pytest.raises(FloatingPointError, match="z="):
        maximize(lambda X: np.where(X[:, 0] > 0.5, np.nan, 0.0), BOX1)


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 2 ** 31 - 1), st.integers(2, 30), st.integers(0, 30))
def test_budget_determinism_and_monotone_best(seed, n, iters):
    box = BoundingBox((0.0, 0.0), (TWO_PI, TWO_PI))
    seen = []

    def f(X):
        v = np.sin(3 * X[:, 0]) * np.cos(2 * X[:, 1]) + 1.0
        seen.append(v.copy())
        return v

    cfg = SwarmConfig(n_particles=n, max_iters=iters, seed=seed)
    r1 = maximize(f, box, cfg)
    first = seen[0]
    r2 = maximize(f, box, cfg)
    assert r1.evals <= n * (iters + 1)
    assert r1.f_max >= np.max(first)
    np.testing.assert_array_equal(r1.z_max, r2.z_max)
    assert r1.f_max == r2.f_max
