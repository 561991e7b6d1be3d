from __future__ import annotations

import numpy as np
import pytest

from nippas.geometry import TWO_PI, SimplexChart
from nippas.models import (AnalyticToy, ShallowWaterDambreak, SteadyAdvectionDiffusion,
                           UnsteadyAdvectionDiffusion, analytic_toy, steady_ad, unsteady_ad)
from nippas.models.steady_ad import PROFILES
from nippas.models.unsteady_ad import fourier_diff_matrix


def with_re(re, n_pde=999):
    m = SteadyAdvectionDiffusion("Re1", n_pde, "mid")
    m.reynolds = lambda z: np.full_like(np.asarray(z, dtype=float), re)
    return m


def test_steady_diffusion_limit():
    assert with_re(1e-6).sample([0.0]).u[0] == pytest.approx(0.5, abs=1e-6)


def test_steady_re_one_matches_ode_solution():
    u = with_re(1.0).sample([0.0]).u[0]
    assert u == pytest.approx((np.exp(0.5) - 1) / (np.e - 1), abs=1e-5)
    assert u == pytest.approx(0.37754, abs=1e-5)


def test_steady_second_order_convergence():
    exact = (np.exp(5 * 0.5) - 1) / (np.exp(5) - 1)
    e1 = abs(with_re(5.0, 99).sample([0.0]).u[0] - exact)
    e2 = abs(with_re(5.0, 199).sample([0.0]).u[0] - exact)
    assert 0.8 * 4 <= e1 / e2 <= 1.2 * 4


def test_steady_profiles_and_cell_reynolds_guard():
    assert PROFILES["Re1"](1.0) == 100.0
    assert PROFILES["Re2"](1.0) == pytest.approx(100.0)
    assert PROFILES["Re3"](0.0) == pytest.approx(100.0)
    with pytest.raises(ValueError, match="cell Reynolds"):
        SteadyAdvectionDiffusion("Re1", 40).sample([1.0])
    with pytest.raises(ValueError):
        SteadyAdvectionDiffusion("Re9")
    with pytest.raises(ValueError):
        steady_ad([1.5])


def test_steady_full_space_consistency():
    m = SteadyAdvectionDiffusion("Re2", 99, "identity")
    s = m.sample([0.4])
    A = m.operator([0.4]).toarray()
    np.testing.assert_allclose(A @ s.v, m.full_source([0.4]), atol=1e-9)
    g = m.gammas([[0.4]])[0]
    np.testing.assert_allclose(g[0] * s.full_terms[0] + g[1] * s.full_terms[1], m.full_source([0.4]),
                               atol=1e-9)


def test_unsteady_exact_values():
    m = UnsteadyAdvectionDiffusion("CN", 256, 1e-5)
    assert m.sample([np.pi / 2, 0.0]).u[0] == pytest.approx(-1.0, abs=1e-4)
    assert m.sample([np.pi / 2, 1.0]).u[0] == pytest.approx(-np.exp(-1), abs=1e-4)


def test_unsteady_cn_matches_analytic_at_random_points():
    m = UnsteadyAdvectionDiffusion("CN", 256, 1e-5)
    Z = np.random.default_rng(0).random((10, 2)) * TWO_PI
    np.testing.assert_allclose(m.qoi_batch(Z), m.exact_qoi(Z), atol=1e-4)


@pytest.mark.parametrize("scheme", ["BE", "CN", "RK4"])
def test_unsteady_fourier_march_equals_dense_march(scheme):
    n, dt, steps = 16, 1e-2, 100
    m = UnsteadyAdvectionDiffusion(scheme, n, dt, t_end=dt * steps)
    z1, z2 = 1.3, 0.4
    D = fourier_diff_matrix(n)
    L = -z1 * D + z2 * D @ D
    I = np.eye(n)
    if scheme == "BE":
        step = np.linalg.inv(I - dt * L)
    elif scheme == "CN":
        step = np.linalg.solve(I - 0.5 * dt * L, I + 0.5 * dt * L)
    else:
        M = dt * L
        step = I + M + M @ M / 2 + M @ M @ M / 6 + M @ M @ M @ M / 24
    v = np.sin(m.x)
    for _ in range(steps):
        v = step @ v
    np.testing.assert_allclose(m.solve_field([z1, z2]), v, atol=1e-12)
    assert m.sample([z1, z2]).u[0] == pytest.approx(v[0], abs=1e-12)


def test_rk4_stability_guard():
    with pytest.raises(ValueError, match="RK4 unstable"):
        unsteady_ad([1.0, 6.0], scheme="RK4", n_x=256, dt=1e-3)


def test_swe_no_jump_is_trivial():
    m = ShallowWaterDambreak(n_cells=200)
    s = m.trivial_point()
    P = m.physical(s[None, :])[0]
    np.testing.assert_allclose(P[1:], [1.0, 0.0], atol=1e-14)
    assert m.sample(s).u[0] == pytest.approx(1.0, abs=1e-12)


def test_swe_mass_conservation():
    m = ShallowWaterDambreak(n_cells=400)
    s = np.array([0.2, 0.3])
    P = m.physical(s[None, :])
    h0, _ = m.initial_state(P)
    h, _ = m.solve_state(s)
    assert abs(h.sum() - h0.sum()) <= 1e-10 * h0.sum()


def test_swe_rejects_outside_triangle():
    with pytest.raises(ValueError):
        ShallowWaterDambreak(n_cells=50).sample([0.8, 0.8])
    with pytest.raises(ValueError):
        ShallowWaterDambreak(n_cells=51)


@pytest.mark.slow
def test_swe_coarse_matches_fine_reference_at_corner():
    # chart corner (0, 1) maps to (g, h_l, v_l) = (8, 1.5, -0.5)
    s = np.array([0.0, 1.0])
    np.testing.assert_allclose(SimplexChart().map(s[None, :])[0], (8.0, 1.5, -0.5))
    fine = ShallowWaterDambreak(n_cells=16000).sample(s).u[0]
    coarse = ShallowWaterDambreak(n_cells=2000).sample(s).u[0]
    assert abs(coarse - fine) <= 2e-2


def test_toy_model():
    assert analytic_toy([0.3], f="constant").u[0] == 2.5
    with pytest.raises(ValueError):
        AnalyticToy("nope")


MODELS = [
    SteadyAdvectionDiffusion("Re1", 199, "mid"),
    SteadyAdvectionDiffusion("Re3", 99, "identity"),
    UnsteadyAdvectionDiffusion("BE", 64, 1e-3),
    UnsteadyAdvectionDiffusion("CN", 64, 1e-3),
    UnsteadyAdvectionDiffusion("RK4", 64, 4e-4),
    ShallowWaterDambreak(n_cells=100),
    AnalyticToy("product", UnsteadyAdvectionDiffusion().domain),
]


@pytest.mark.parametrize("model", MODELS, ids=["ssad-mid", "ssad-identity", "uad-BE", "uad-CN", "uad-RK4", "swe", "toy"])
def test_discrete_equation_identity_at_random_points(model):
    Z = model.domain.uniform(np.random.default_rng(1), 100)
    for z in Z:
        s = model.sample(z)
        scale = 1.0 + np.max(np.abs(s.terms)) + np.max(np.abs(model.qoi_source(z[None, :])))
        assert model.residual_identity(z, s) <= 1e-10 * scale
