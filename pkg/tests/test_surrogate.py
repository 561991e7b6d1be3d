from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from nippas.basis import graded_lex_indices
from nippas.geometry import BoundingBox
from nippas.models import SteadyAdvectionDiffusion
from nippas.surrogate import (DuplicateNodeError, SampleSet, SurrogateState, add_node, build,
                              eval_qoi, eval_term, sample_datasets)

BOX1 = BoundingBox((0.0,), (1.0,))
BOX2 = BoundingBox((0.0, 0.0), (1.0, 1.0))


def test_single_node_is_constant():
    state, _ = build(BOX1, [[0.3]], {"u": [4.0]})
    np.testing.assert_allclose(state.eval_qoi(np.linspace(0, 1, 7)[:, None]), 4.0)


def test_two_nodes_linear():
    state, _ = build(BOX1, [[0.0], [1.0]], {"u": [0.0, 1.0]})
    assert eval_qoi(state, [0.5])[0] == pytest.approx(0.5, abs=1e-14)


def test_2d_bilinear_in_span_of_six_functions():
    rng = np.random.default_rng(0)
    Z = rng.random((6, 2))
    f = lambda Z: 3.0 + Z[:, 0] * Z[:, 1]  # noqa: E731
    state, _ = build(BOX2, Z, {"u": f(Z)})
    assert state.basis.indices == tuple(graded_lex_indices(2, 6))
    P = rng.random((100, 2))
    np.testing.assert_allclose(state.eval_qoi(P)[:, 0], f(P), atol=1e-10)


def test_duplicate_node_reports_nearest():
    state, samples = build(BOX1, [[0.2], [0.7]], {"u": [1.0, 2.0]})
    with pytest.raises(DuplicateNodeError) as exc:
        add_node(state, samples, [0.7 + 1e-12], {"u": [3.0]}, delta_dup=1e-9)
    np.testing.assert_allclose(exc.value.nearest, [0.7])


def test_wrong_dimension_and_empty():
    state = SurrogateState(BOX2)
    with pytest.raises(ValueError):
        state.eval_qoi([[0.1, 0.2]])
    with pytest.raises(ValueError):
        state.add_node(SampleSet(2), [0.1], {"u": [1.0]})


def test_term_interpolants_reproduce_sampled_terms():
    model = SteadyAdvectionDiffusion("Re1", 99, "mid")
    state, samples = SurrogateState(BOX1, 2), SampleSet(1)
    for z in (0.1, 0.5, 0.9, 0.3):
        s = model.sample([z])
        state.add_node(samples, [z], sample_datasets(s, 2))
        for l in range(2):
            np.testing.assert_allclose(eval_term(state, l, [z]), s.terms[l], rtol=1e-8, atol=1e-8)
    with pytest.raises(ValueError):
        state.eval_term(2, [0.1])


def test_mismatched_dataset_names():
    state, samples = build(BOX1, [[0.2]], {"u": [1.0]})
    with pytest.raises(ValueError):
        state.add_node(samples, [0.6], {"u": [1.0], "v": [2.0]})


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 2 ** 31 - 1), st.integers(1, 2), st.integers(1, 40))
def test_interpolation_at_nodes_after_every_append(seed, dim, n):
    rng = np.random.default_rng(seed)
    box = BoundingBox((0.0,) * dim, (1.0,) * dim)
    state, samples = SurrogateState(box), SampleSet(dim)
    for _ in range(n):
        z = rng.random(dim)
        state.add_node(samples, z, {"u": [np.sin(3 * z.sum()) + 2.0]})
        U = samples.U
        err = np.abs(state.eval_qoi(samples.nodes) - U)
        if not state.ill_conditioned:
            assert np.all(err <= 1e-8 * (1 + np.abs(U)))


def test_coefficients_match_direct_solve_and_node_order():
    rng = np.random.default_rng(3)
    state, samples = SurrogateState(BOX2), SampleSet(2)
    Z = []
    for _ in range(25):
        z = rng.random(2)
        Z.append(z)
        state.add_node(samples, z, {"u": [np.exp(z[0] - z[1])]})
        A = state.vandermonde(samples.nodes)
        if np.linalg.cond(A) < 1e8:
            c = np.linalg.solve(A, samples.U)
            assert np.linalg.norm(state.coef("u") - c) <= 1e-8 * np.linalg.norm(c)
    np.testing.assert_array_equal(samples.nodes, np.array(Z))


def test_nodes_up_to_100_in_1d():
    z = (1 - np.cos(np.pi * (np.arange(100) + 0.5) / 100)) / 2  # Chebyshev points, well conditioned
    order = np.argsort(np.random.default_rng(0).random(100))
    state, samples = build(BOX1, z[order][:, None], {"u": np.cos(4 * z[order])})
    assert not state.ill_conditioned
    np.testing.assert_allclose(state.eval_qoi(samples.nodes), samples.U, rtol=1e-8, atol=1e-8)
