import random
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from ptsphere.errors import DimensionMismatch, SingularMatrix
from ptsphere.exact import I, rat
from ptsphere.matrices import (
    ExactMatrix,
    FloatMatrix,
    eig_dense,
    exact_inverse,
    mat_exp_numeric,
)


def _rand_matrix(rng, n):
    return ExactMatrix(
        [
            [rat(Fraction(rng.randint(-6, 6), rng.randint(1, 4))) for _ in range(n)]
            for _ in range(n)
        ]
    )


def test_identity_and_product():
    e = ExactMatrix.identity(3)
    m = ExactMatrix([[1, 2, 0], [0, 1, 3], [1, 0, 1]])
    assert e @ m == m
    assert m @ e == m
    assert (m - m).is_zero()


def test_det_rank_examples():
    m = ExactMatrix([[1, 2], [3, 4]])
    assert m.det() == rat(-2)
    assert m.rank() == 2
    sing = ExactMatrix([[1, 2], [2, 4]])
    assert sing.det() == rat(0)
    assert sing.rank() == 1


def test_exact_inverse_complex_entries():
    m = ExactMatrix([[rat(1), I], [I, rat(1)]])
    inv = exact_inverse(m)
    assert m @ inv == ExactMatrix.identity(2)


def test_exact_inverse_singular_raises():
    with pytest.raises(SingularMatrix):
        exact_inverse(ExactMatrix([[1, 1], [1, 1]]))


def test_solve_and_commutator():
    m = ExactMatrix([[2, 1], [1, 1]])
    x = m.solve([rat(3), rat(2)])
    assert x == [rat(1), rat(1)]
    a = ExactMatrix([[0, 1], [0, 0]])
    b = ExactMatrix([[0, 0], [1, 0]])
    assert a.commutator(b) == ExactMatrix([[1, 0], [0, -1]])


def test_shape_mismatch():
    with pytest.raises(DimensionMismatch):
        ExactMatrix.identity(2) @ ExactMatrix.identity(3)


@given(st.integers(min_value=0, max_value=10**6))
@settings(max_examples=200, deadline=None)
def test_random_inverse_roundtrip(seed):
    rng = random.Random(seed)
    m = _rand_matrix(rng, 3)
    if m.det().is_zero():
        with pytest.raises(SingularMatrix):
            exact_inverse(m)
    else:
        assert m @ exact_inverse(m) == ExactMatrix.identity(3)


def test_eig_dense_nonsymmetric():
    a = np.array([[0.0, 1.0], [-1.0, 0.0]])
    w = eig_dense(a)
    assert np.allclose(sorted(w, key=lambda z: z.imag), [-1j, 1j])


def test_eig_dense_similarity_invariance():
    rng = np.random.default_rng(7)
    a = rng.normal(size=(6, 6)) + 1j * rng.normal(size=(6, 6))
    s = rng.normal(size=(6, 6)) + np.eye(6) * 10
    w1 = np.sort_complex(eig_dense(FloatMatrix(a)))
    w2 = np.sort_complex(eig_dense(np.linalg.solve(s, a @ s)))
    assert np.allclose(w1, w2, atol=1e-9)


def test_mat_exp_rotation():
    theta = 0.3
    g = np.array([[0.0, -theta], [theta, 0.0]])
    r = mat_exp_numeric(g)
    expect = np.array(
        [[np.cos(theta), -np.sin(theta)], [np.sin(theta), np.cos(theta)]]
    )
    assert np.allclose(r, expect)
