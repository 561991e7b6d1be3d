from __future__ import annotations

import numpy as np
import pytest

from nippas.distributions import BetaProduct, Uniform
from nippas.geometry import TWO_PI, BoundingBox, disc_domain, hypercube
from nippas.models import AnalyticToy, SteadyAdvectionDiffusion, UnsteadyAdvectionDiffusion
from nippas.residual import RefinementMeasure, error_bound, theorem_identity
from nippas.surrogate import SampleSet, SurrogateState, sample_datasets


def fit(model, nodes, keep_full=None):
    state, samples = SurrogateState(model.domain.box, model.n_terms), SampleSet(model.dim)
    for z in nodes:
        state.add_node(samples, z, sample_datasets(model.sample(z), model.n_terms, keep_full))
    return state, samples


NODES1 = [[0.5], [0.0], [1.0], [0.25], [0.8], [0.1]]


def test_R_zero_at_nodes_positive_elsewhere():
    model = SteadyAdvectionDiffusion("Re1", 199, "mid")
    state, samples = fit(model, [[0.0]])
    m = RefinementMeasure("R", model, model.domain)
    scale = 1 + np.max(np.abs(samples.array("term0")))
    assert m(state, [[0.0]])[0] <= 1e-7 * scale
    assert m(state, [[0.5]])[0] > 1e-3


@pytest.mark.parametrize("kind,full", [("R", None), ("R_star", "terms"), ("R_EI", "v")])
def test_measures_vanish_at_nodes(kind, full):
    model = SteadyAdvectionDiffusion("Re1", 199, "mid")
    state, samples = fit(model, NODES1, full)
    vals = RefinementMeasure(kind, model, model.domain)(state, samples.nodes)
    data = max(np.max(np.abs(np.array(v))) for v in samples.data.values())
    assert np.max(vals) <= 1e-7 * (1 + data)


def test_R_rho_uniform_is_scaled_R():
    model = UnsteadyAdvectionDiffusion("CN", 32, 1e-2)
    state, _ = fit(model, [[1.0, 0.5], [3.0, 2.0], [5.0, 0.2]])
    pdf = Uniform(model.domain)
    Z = model.domain.box.uniform(np.random.default_rng(0), 20)
    r = RefinementMeasure("R", model, model.domain)(state, Z)
    rr = RefinementMeasure("R_rho", model, model.domain, pdf)(state, Z)
    np.testing.assert_allclose(rr, r / TWO_PI ** 2, rtol=1e-14)


def test_R_rho_zero_where_density_zero_and_peak_beats_tail():
    box = BoundingBox((0.0,), (1.0,))
    model = AnalyticToy(lambda Z: np.abs(Z[:, 0] - 0.5), hypercube((0.0,), (1.0,)))
    state, _ = fit(model, [[0.5]])
    pdf = BetaProduct((2,), (2,), box)
    m = RefinementMeasure("R_rho", model, model.domain, pdf)
    assert m(state, [[0.0]])[0] == 0.0 and m(state, [[1.0]])[0] == 0.0
    # equal R at 0.3 and 0.7 by symmetry; density peak at 0.5
    r = RefinementMeasure("R", model, model.domain)(state, [[0.4], [0.1]])
    assert r[0] < r[1]
    a, b = m(state, [[0.4], [0.9]])
    ra, rb = RefinementMeasure("R", model, model.domain)(state, [[0.4], [0.9]])
    assert a / ra > b / rb


def test_R_rho_requires_pdf():
    model = AnalyticToy()
    with pytest.raises(ValueError):
        RefinementMeasure("R_rho", model, model.domain)


def test_full_space_measures_gated_to_linear_models():
    model = UnsteadyAdvectionDiffusion("CN", 32, 1e-2)
    for kind in ("R_star", "R_EI"):
        with pytest.raises(ValueError):
            RefinementMeasure(kind, model, model.domain)
    with pytest.raises(ValueError):
        RefinementMeasure("bogus", model, model.domain)


def test_kind_mismatch_and_out_of_box():
    from nippas.residual import eval_R_EI, eval_R_star
    model = SteadyAdvectionDiffusion("Re1", 99, "mid")
    state, _ = fit(model, NODES1[:2])
    m = RefinementMeasure("R", model, model.domain)
    with pytest.raises(ValueError):
        eval_R_star(m, state, [[0.3]])
    with pytest.raises(ValueError):
        eval_R_EI(m, state, [[0.3]])
    with pytest.raises(ValueError):
        m(state, [[1.5]])


def test_indicator_zero_returns_exact_zero():
    model = UnsteadyAdvectionDiffusion("CN", 32, 1e-2, domain=disc_domain())
    state, _ = fit(model, [[np.pi, np.pi], [2.0, 3.0]])
    m = RefinementMeasure("R", model, model.domain)
    assert m(state, [[0.05, 0.05]])[0] == 0.0
    assert m(state, [[3.0, 4.0]])[0] > 0.0


def test_R_EI_equals_R_for_identity_Q():
    model = SteadyAdvectionDiffusion("Re2", 99, "identity")
    state, _ = fit(model, NODES1, "v")
    Z = np.random.default_rng(1).random((20, 1))
    r = RefinementMeasure("R", model, model.domain)(state, Z)
    ei = RefinementMeasure("R_EI", model, model.domain)(state, Z)
    np.testing.assert_allclose(ei, r, rtol=1e-8, atol=1e-8 * np.max(r))


@pytest.mark.parametrize("n_pde", [50, 200])
def test_R_star_is_the_true_error(n_pde):
    model = SteadyAdvectionDiffusion("Re1", n_pde, "mid")
    state, _ = fit(model, [[0.5], [0.0], [1.0], [0.2], [0.75], [0.9], [0.05], [0.35], [0.6], [0.98]],
                   "terms")
    Z = np.random.default_rng(2).random((50, 1))
    rs = RefinementMeasure("R_star", model, model.domain)(state, Z)
    U = model.qoi_batch(Z)
    err = np.linalg.norm(state.eval_qoi(Z) - U, axis=1)
    assert np.all(np.abs(rs - err) <= 1e-8 * (1 + np.linalg.norm(U, axis=1)))
    for z, u in zip(Z, U):
        lhs, rhs = theorem_identity(model, state, z)
        assert np.max(np.abs(lhs - rhs)) <= 1e-8 * (1 + np.linalg.norm(u))
        assert np.linalg.norm(rhs) <= error_bound(model, state, z) + 1e-8
