from __future__ import annotations

import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from nippas.basis import (BasisSpec, chebyshev_t, eval_basis_fn, eval_combination,
                          graded_lex_indices, next_index)
from nippas.geometry import TWO_PI, BoundingBox

BOX2 = BoundingBox((0.0, 0.0), (TWO_PI, TWO_PI))


def test_next_index_2d():
    assert next_index(BasisSpec(BOX2, ((0, 0),))) == (1, 0)
    assert next_index(BasisSpec(BOX2, ((0, 0), (1, 0)))) == (0, 1)
    assert next_index(BasisSpec(BOX2, ((0, 0), (1, 0), (0, 1)))) == (2, 0)
    assert next_index(BasisSpec(BOX2, ())) == (0, 0)


def test_first_five_3d():
    assert graded_lex_indices(3, 5) == [(0, 0, 0), (1, 0, 0), (0, 1, 0), (0, 0, 1), (2, 0, 0)]


@pytest.mark.parametrize("dim", [1, 2, 3])
def test_order_matches_enumerate_and_sort(dim):
    M = 200
    seq = graded_lex_indices(dim, M)
    deg = 0
    while len([m for m in itertools.product(range(deg + 1), repeat=dim) if sum(m) <= deg]) < M:
        deg += 1
    allm = [m for m in itertools.product(range(deg + 1), repeat=dim) if sum(m) <= deg]
    ref = sorted(allm, key=lambda m: (sum(m), tuple(-v for v in m)))[:M]
    assert seq == ref
    assert len(set(seq)) == M


def test_basis_rejects_misordered_indices():
    with pytest.raises(ValueError):
        BasisSpec(BOX2, ((0, 0), (0, 1), (1, 0)))
    with pytest.raises(ValueError):
        BasisSpec(BOX2, ((0, -1),))


def test_eval_basis_examples():
    assert eval_basis_fn((0,), BoundingBox((0,), (1,)), 0.37) == 1.0
    assert eval_basis_fn((2,), BoundingBox((-1,), (1,)), 0.5) == pytest.approx(-0.5)
    assert eval_basis_fn((1, 1), BOX2, (np.pi / 2, 3 * np.pi / 2)) == pytest.approx(-0.25)


def test_eval_outside_box_warns():
    with pytest.warns(UserWarning):
        eval_basis_fn((1,), BoundingBox((0,), (1,)), 2.0)


def test_combination_constant_and_linear_interpolant():
    box = BoundingBox((-1,), (1,))
    spec = BasisSpec(box, graded_lex_indices(1, 3))
    assert eval_combination(BasisSpec(box, ((0,),)), [4.2], 0.77) == pytest.approx(4.2)
    nodes = np.array([-1.0, 0.0, 1.0])
    c = np.linalg.solve(spec.vandermonde(nodes[:, None]), nodes)
    assert abs(eval_combination(spec, c, np.array([0.3])) - 0.3) < 1e-14


def test_combination_length_mismatch():
    with pytest.raises(ValueError):
        eval_combination(BasisSpec(BOX2, graded_lex_indices(2, 3)), [1.0, 2.0], [1.0, 1.0])


@settings(max_examples=50, deadline=None)
@given(st.integers(1, 30), st.integers(0, 2 ** 31 - 1))
def test_combination_equals_termwise_sum(m, seed):
    rng = np.random.default_rng(seed)
    spec = BasisSpec(BOX2, graded_lex_indices(2, m))
    c = rng.standard_normal(m)
    z = rng.random(2) * TWO_PI
    naive = sum(ci * eval_basis_fn(idx, BOX2, z) for ci, idx in zip(c, spec.indices))
    assert eval_combination(spec, c, z) == pytest.approx(naive, rel=1e-12, abs=1e-13)


def test_chebyshev_bounded_on_interval():
    t = np.random.default_rng(0).uniform(-1, 1, 1000)
    for k in range(51):
        assert max(abs(chebyshev_t(k, x)) for x in t[:100]) <= 1.0 + 1e-12
    V = BasisSpec(BoundingBox((-1,), (1,)), graded_lex_indices(1, 51)).vandermonde(t[:, None])
    assert np.max(np.abs(V)) <= 1.0 + 1e-12


def test_vandermonde_matches_scalar_evaluation():
    spec = BasisSpec(BOX2, graded_lex_indices(2, 15))
    Z = np.random.default_rng(1).random((7, 2)) * TWO_PI
    ref = np.array([[eval_basis_fn(m, BOX2, z) for m in spec.indices] for z in Z])
    np.testing.assert_allclose(spec.vandermonde(Z), ref, atol=1e-14)
    np.testing.assert_allclose(spec.column(9, Z), ref[:, 9], atol=1e-14)
