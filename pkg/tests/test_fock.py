import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from vdpsync.fock import (
    InvalidStateError,
    adjoint,
    annihilation_operator,
    embed,
    kronecker,
    unvectorize,
    validate_density_matrix,
    vectorize,
)

from conftest import random_density_matrix, random_matrix

finite = st.floats(-1e6, 1e6, allow_nan=False, allow_infinity=False)
complex_entries = st.complex_numbers(max_magnitude=1e6, allow_nan=False, allow_infinity=False)


def test_annihilation_dim3():
    a = annihilation_operator(3)
    expected = np.zeros((3, 3))
    expected[0, 1] = 1.0
    expected[1, 2] = np.sqrt(2)
    assert np.array_equal(a, expected)
    assert a.dtype == np.complex128


def test_annihilation_kills_vacuum():
    vac = np.zeros(6)
    vac[0] = 1
    assert np.array_equal(annihilation_operator(6) @ vac, np.zeros(6))


@pytest.mark.parametrize("dim", [2, 5, 12])
def test_number_operator(dim):
    a = annihilation_operator(dim)
    assert np.allclose(adjoint(a) @ a, np.diag(np.arange(dim)), atol=1e-14)


@pytest.mark.parametrize("dim", [1, 0, -3, 2.5])
def test_annihilation_rejects_small_dim(dim):
    with pytest.raises(ValueError):
        annihilation_operator(dim)


@pytest.mark.parametrize("dim", [2, 4, 10])
def test_truncated_commutator(dim):
    a = annihilation_operator(dim)
    comm = a @ adjoint(a) - adjoint(a) @ a
    # sqrt(n)**2 rounds, so "exact" means within a few ulps of n
    assert np.max(np.abs(comm[:-1, :-1] - np.eye(dim - 1))) <= 8 * np.finfo(float).eps * dim
    assert abs(comm[-1, -1] + (dim - 1)) <= 8 * np.finfo(float).eps * dim


def test_adjoint_of_annihilation():
    ad = adjoint(annihilation_operator(3))
    assert ad[1, 0] == 1 and ad[2, 1] == np.sqrt(2)
    assert np.count_nonzero(ad) == 2


def test_adjoint_anti_homomorphism(rng):
    for _ in range(20):
        a, b = random_matrix(rng, 4), random_matrix(rng, 4)
        assert np.max(np.abs(adjoint(a @ b) - adjoint(b) @ adjoint(a))) <= 1e-14 * max(
            1.0, np.abs(a @ b).max()
        )


@given(arrays(np.complex128, (3, 3), elements=complex_entries))
def test_adjoint_involution(m):
    assert np.array_equal(adjoint(adjoint(m)), m)


def test_kronecker_examples():
    assert np.array_equal(kronecker(np.eye(2), np.eye(2)), np.eye(4))
    assert np.array_equal(kronecker(np.diag([1, 2]), np.eye(2)), np.diag([1, 1, 2, 2]))


def test_kronecker_mixed_product(rng):
    a, b, c, d = (random_matrix(rng, 3) for _ in range(4))
    lhs = kronecker(a, b) @ kronecker(c, d)
    assert np.max(np.abs(lhs - kronecker(a @ c, b @ d))) <= 1e-12 * np.abs(lhs).max()


def test_vectorization_identity(rng):
    for _ in range(10):
        a, b, x = (random_matrix(rng, 3) for _ in range(3))
        # oracle: plain triple product, vectorized by explicit column loop
        axb = a @ x @ b
        expected = np.concatenate([axb[:, j] for j in range(3)])
        assert np.max(np.abs(kronecker(b.T, a) @ vectorize(x) - expected)) <= 1e-12


def test_vectorize_column_stacking():
    assert np.array_equal(vectorize(np.array([[1, 2], [3, 4]])), np.array([1, 3, 2, 4]))


def test_vectorize_trace(rng):
    m = random_matrix(rng, 5)
    v = vectorize(m)
    assert np.isclose(sum(v[j + 5 * j] for j in range(5)), np.trace(m), rtol=0, atol=1e-13)


@given(arrays(np.complex128, st.integers(1, 6).map(lambda n: (n, n)), elements=complex_entries))
def test_vectorize_round_trip_bitwise(m):
    back = unvectorize(vectorize(m), m.shape[0])
    assert back.tobytes() == m.tobytes()


def test_unvectorize_length_mismatch():
    with pytest.raises(ValueError):
        unvectorize(np.zeros(5), 2)
    with pytest.raises(ValueError):
        vectorize(np.zeros((2, 3)))


def test_validate_density_matrix(rng):
    rho = random_density_matrix(rng, 4)
    validate_density_matrix(rho)
    with pytest.raises(InvalidStateError, match="trace"):
        validate_density_matrix(2 * rho)
    bad = rho.copy()
    bad[0, 1] += 1e-6
    with pytest.raises(InvalidStateError, match="Hermitian"):
        validate_density_matrix(bad)
    with pytest.raises(InvalidStateError, match="negative"):
        validate_density_matrix(np.diag([1.5, -0.5]).astype(complex))


def test_embed_zero_pads(rng):
    rho = random_density_matrix(rng, 3)
    big = embed(rho, 5)
    assert np.array_equal(big[:3, :3], rho)
    assert not big[3:].any() and not big[:, 3:].any()
    with pytest.raises(ValueError):
        embed(big, 3)
