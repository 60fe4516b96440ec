import numpy as np
import pytest
from hypothesis import given, strategies as st

from zecap.linalg import (DimensionError, OperatorSubspace, Tolerances, complement, hs_inner, hs_norm,
                          orthonormalize_span, project, unvec, vec)

from conftest import random_complex

shapes = st.tuples(st.integers(1, 4), st.integers(1, 4))
seeds = st.integers(0, 2**32 - 1)


@given(shapes, seeds)
def test_vec_unvec_roundtrip(shape, seed):
    M = random_complex(np.random.default_rng(seed), *shape)
    assert np.array_equal(unvec(vec(M), *shape), M)


def test_vec_is_column_stacking():
    M = np.array([[1, 2], [3, 4]])
    assert vec(M).tolist() == [1, 3, 2, 4]


@given(shapes, seeds)
def test_hs_inner_matches_trace_formula(shape, seed):
    rng = np.random.default_rng(seed)
    M, N = random_complex(rng, *shape), random_complex(rng, *shape)
    assert np.isclose(hs_inner(M, N), np.trace(M.conj().T @ N))
    assert np.isclose(hs_norm(M) ** 2, hs_inner(M, M).real)


def test_hs_inner_rejects_mismatched_shapes():
    with pytest.raises(DimensionError):
        hs_inner(np.eye(2), np.eye(3))


@given(shapes, st.integers(1, 6), seeds)
def test_orthonormalize_span_is_orthonormal_and_spans(shape, k, seed):
    rng = np.random.default_rng(seed)
    mats = random_complex(rng, k, *shape)
    mats = np.concatenate([mats, mats[:1] * 2.0 + mats[-1:]])  # a dependent element
    U = orthonormalize_span(mats)
    G = U.vecs.conj().T @ U.vecs
    assert np.allclose(G, np.eye(U.dim), atol=1e-10)
    assert U.dim == min(k, shape[0] * shape[1])
    for M in mats:
        assert project(U, M)[1] <= 1e-9 * max(1.0, np.linalg.norm(M))


@given(shapes, st.integers(0, 5), seeds)
def test_complement_is_orthogonal_and_completes(shape, k, seed):
    rng = np.random.default_rng(seed)
    k = min(k, shape[0] * shape[1])
    U = orthonormalize_span(random_complex(rng, k, *shape), shape=shape)
    C = complement(U)
    assert U.dim + C.dim == U.ambient_dim
    if U.dim and C.dim:
        assert np.max(np.abs(U.vecs.conj().T @ C.vecs)) < 1e-10
    assert np.allclose(U.projector() + C.projector(), np.eye(U.ambient_dim), atol=1e-10)


def test_same_as_ignores_basis_choice(rng):
    mats = random_complex(rng, 3, 2, 3)
    A = orthonormalize_span(mats)
    B = orthonormalize_span(mats[::-1] + 0.3 * mats[0])
    assert A.same_as(B)
    assert not A.same_as(orthonormalize_span(mats[:2]))


def test_adjoint_and_contains():
    U = orthonormalize_span([np.array([[0, 1, 0], [0, 0, 0]])])
    assert U.adjoint().shape == (3, 2)
    assert U.contains(np.array([[0, 5j, 0], [0, 0, 0]]))
    assert not U.contains(np.array([[1, 0, 0], [0, 0, 0]]))


def test_zero_and_full():
    assert OperatorSubspace.zero(2, 3).dim == 0
    assert OperatorSubspace.full(2, 3).dim == 6
    assert complement(OperatorSubspace.full(2, 2)).dim == 0


def test_basis_is_read_only():
    U = OperatorSubspace.full(2, 2)
    with pytest.raises(ValueError):
        U.basis[0, 0, 0] = 3


@pytest.mark.parametrize("kw", [{"tol_orth": 0}, {"tol_rank": -1}, {"tol_converge": 1e-3}])
def test_tolerances_validation(kw):
    with pytest.raises(ValueError):
        Tolerances(**kw)


def test_relative_rank_cutoff_drops_roundoff():
    A = np.eye(2)
    U = orthonormalize_span([A, A + 1e-14 * np.array([[0, 1], [0, 0]])])
    assert U.dim == 1
