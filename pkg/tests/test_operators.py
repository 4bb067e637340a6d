import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from hypothesis.extra.numpy import arrays

from usc_raman import operators as ops
from usc_raman.errors import InvalidDimensionError

from conftest import random_density, random_matrix


def test_annihilation_elements():
    a3 = ops.annihilation(3)
    assert a3[1, 2] == pytest.approx(np.sqrt(2))
    a2 = ops.annihilation(2)
    assert np.count_nonzero(a2) == 1 and a2[0, 1] == 1


def test_annihilation_lowers_fock_state():
    ket3 = np.zeros(4)
    ket3[3] = 1
    out = ops.annihilation(4) @ ket3
    expected = np.zeros(4)
    expected[2] = np.sqrt(3)
    np.testing.assert_allclose(out, expected)


@pytest.mark.parametrize("n", [0, 1, -3, 2.5])
def test_annihilation_rejects_bad_dimension(n):
    with pytest.raises(InvalidDimensionError):
        ops.annihilation(n)


@pytest.mark.parametrize("n", [2, 5, 17])
def test_canonical_commutator_below_cutoff(n):
    a = ops.annihilation(n)
    c = a @ a.conj().T - a.conj().T @ a
    np.testing.assert_allclose(c[: n - 1, : n - 1], np.eye(n - 1), atol=1e-14)


def test_pauli_algebra():
    x, y, z = (ops.pauli(k) for k in "xyz")
    np.testing.assert_allclose(z @ z, np.eye(2))
    np.testing.assert_allclose(x @ y - y @ x, 2j * z)
    np.testing.assert_allclose(y @ z - z @ y, 2j * x)
    assert np.trace(x) == 0
    # ground state (index 0) has sigma_z = -1
    assert z[0, 0] == -1 and z[1, 1] == 1
    np.testing.assert_allclose(ops.lowering().conj().T @ ops.lowering(), (z + np.eye(2)) / 2)


def test_pauli_unknown_axis():
    with pytest.raises(ValueError):
        ops.pauli("w")


def test_embed_dimensions_and_identity():
    n = 5
    a = ops.embed([ops.annihilation(n), 2, 2])
    assert a.shape == (4 * n, 4 * n)
    np.testing.assert_array_equal(ops.embed([n, 2, 2]), np.eye(4 * n))


def test_embed_disjoint_supports_commute():
    n = 4
    sx = ops.embed([n, ops.pauli("x"), 2])
    a = ops.embed([ops.annihilation(n), 2, 2])
    ada = a @ a.conj().T
    assert np.max(np.abs(sx @ ada - ada @ sx)) == 0


def test_embed_preserves_hermiticity(rng):
    h1 = random_matrix(rng, 3)
    h1 = h1 + h1.conj().T
    h = ops.embed([h1, ops.pauli("y"), ops.pauli("z")])
    assert ops.is_hermitian(h, 1e-14)


def test_embed_requires_factors():
    with pytest.raises(InvalidDimensionError):
        ops.embed([])


def test_left_mult_identity():
    np.testing.assert_array_equal(ops.left_mult(np.eye(3)), np.eye(9))


def test_left_right_mult_against_direct_product(rng):
    d = 4
    A, B, rho = (random_matrix(rng, d) for _ in range(3))
    direct = A @ rho @ B
    via_super = ops.left_mult(A) @ ops.right_mult(B) @ ops.vectorize(rho)
    np.testing.assert_allclose(ops.devectorize(via_super), direct, atol=1e-12)
    np.testing.assert_allclose(ops.sandwich(A, B) @ ops.vectorize(rho), ops.vectorize(direct),
                               atol=1e-12)


def test_left_mult_on_identity_recovers_operator(rng):
    A = random_matrix(rng, 5)
    np.testing.assert_allclose(ops.devectorize(ops.left_mult(A) @ ops.vectorize(np.eye(5))), A)


def test_vectorization_is_column_stacking():
    m = np.array([[1, 2], [3, 4]])
    np.testing.assert_array_equal(ops.vectorize(m), [1, 3, 2, 4])


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 64).flatmap(
    lambda d: arrays(np.complex128, (d, d),
                     elements=st.complex_numbers(max_magnitude=1e6, allow_nan=False,
                                                 allow_infinity=False))))
def test_vectorize_round_trip(m):
    np.testing.assert_array_equal(ops.devectorize(ops.vectorize(m)), m)


def test_devectorize_rejects_non_square():
    with pytest.raises(InvalidDimensionError):
        ops.devectorize(np.zeros(5))


def test_dissipator_is_trace_annihilating_and_matches_direct_form(rng):
    d = 4
    J = random_matrix(rng, d)
    rho = random_density(rng, d)
    D = ops.dissipator(J)
    direct = J @ rho @ J.conj().T - 0.5 * (J.conj().T @ J @ rho + rho @ J.conj().T @ J)
    np.testing.assert_allclose(ops.devectorize(D @ ops.vectorize(rho)), direct, atol=1e-12)
    assert np.linalg.norm(ops.vectorize(np.eye(d)) @ D) < 1e-12


def test_trace_norm_of_density_matrix(rng):
    assert ops.trace_norm(random_density(rng, 6)) == pytest.approx(1.0)
