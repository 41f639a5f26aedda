import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from chiralwg import hilbert
from chiralwg.errors import DimensionMismatch

SM = np.array([[0, 0], [1, 0]], dtype=complex)

complex_entries = st.complex_numbers(max_magnitude=10, allow_nan=False, allow_infinity=False)
# Gaussian integers keep every product exact, so equality can be bitwise
gaussian_entries = st.builds(complex, st.integers(-9, 9), st.integers(-9, 9))


def mat(shape, elements=complex_entries):
    return arrays(complex, shape, elements=elements)


def brute_kron(a, b):
    out = np.zeros((a.shape[0] * b.shape[0], a.shape[1] * b.shape[1]), dtype=complex)
    for i in range(a.shape[0]):
        for j in range(a.shape[1]):
            for k in range(b.shape[0]):
                for l in range(b.shape[1]):
                    out[i * b.shape[0] + k, j * b.shape[1] + l] = a[i, j] * b[k, l]
    return out


def test_kron_identity():
    np.testing.assert_array_equal(hilbert.kronecker(np.eye(2), np.eye(2)), np.eye(4))


def test_kron_sigma_minus_left():
    m = hilbert.kronecker(SM, np.eye(2))
    expected = np.zeros((4, 4))
    expected[2, 0] = expected[3, 1] = 1
    np.testing.assert_array_equal(m, expected)


def test_kron_matches_brute_force(rng):
    for _ in range(10):
        a = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
        b = rng.normal(size=(2, 3)) + 1j * rng.normal(size=(2, 3))
        np.testing.assert_allclose(hilbert.kronecker(a, b), brute_kron(a, b), rtol=1e-15, atol=0)


@settings(max_examples=50, deadline=None)
@given(mat((2, 2), gaussian_entries), mat((2, 3), gaussian_entries), mat((3, 2), gaussian_entries))
def test_kron_associative_exact(a, b, c):
    left = hilbert.kronecker(hilbert.kronecker(a, b), c)
    right = hilbert.kronecker(a, hilbert.kronecker(b, c))
    np.testing.assert_array_equal(left, right)


@settings(max_examples=50, deadline=None)
@given(mat((2, 2)), mat((2, 3)), mat((3, 2)))
def test_kron_associative_float(a, b, c):
    left = hilbert.kronecker(hilbert.kronecker(a, b), c)
    right = hilbert.kronecker(a, hilbert.kronecker(b, c))
    np.testing.assert_allclose(left, right, rtol=1e-14, atol=1e-300)


def test_lowering_single_site():
    np.testing.assert_array_equal(hilbert.lowering_operator(0, 1), [[0, 0], [1, 0]])


def test_lowering_site_placement():
    np.testing.assert_array_equal(hilbert.lowering_operator(1, 2), np.kron(np.eye(2), SM))
    np.testing.assert_array_equal(hilbert.lowering_operator(0, 2), np.kron(SM, np.eye(2)))


@pytest.mark.parametrize("n", [1, 2, 3])
def test_lowering_nilpotent(n):
    for i in range(n):
        s = hilbert.lowering_operator(i, n)
        assert not np.any(s @ s)


@pytest.mark.parametrize("site,n", [(-1, 2), (2, 2), (0, 0)])
def test_lowering_out_of_range(site, n):
    with pytest.raises((IndexError, ValueError)):
        hilbert.lowering_operator(site, n)


def test_distinct_sites_commute():
    for n in (2, 3):
        ops = hilbert.lowering_operators(n)
        for i in range(n):
            for j in range(n):
                if i != j:
                    np.testing.assert_array_equal(ops[i] @ ops[j], ops[j] @ ops[i])


def test_dagger_examples(rng):
    np.testing.assert_array_equal(hilbert.dagger(np.eye(3)), np.eye(3))
    np.testing.assert_array_equal(hilbert.dagger(SM), [[0, 1], [0, 0]])
    a = rng.normal(size=(3, 4)) + 1j * rng.normal(size=(3, 4))
    np.testing.assert_array_equal(hilbert.dagger(hilbert.dagger(a)), a)


@settings(max_examples=50, deadline=None)
@given(mat((4, 4)), mat((4, 4)))
def test_trace_cyclic(a, b):
    assert abs(np.trace(a @ b) - np.trace(b @ a)) <= 1e-9 * (1 + np.abs(a).max() * np.abs(b).max())


def test_matmul_checks_dimensions():
    with pytest.raises(DimensionMismatch):
        hilbert.matmul(np.ones((2, 3)), np.ones((2, 3)))


def test_vectorisation_convention(rng):
    a, rho, b = (rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4)) for _ in range(3))
    np.testing.assert_allclose(hilbert.sprepost(a, b) @ hilbert.vec(rho), hilbert.vec(a @ rho @ b), atol=1e-12)
    np.testing.assert_allclose(hilbert.spre(a) @ hilbert.vec(rho), hilbert.vec(a @ rho), atol=1e-12)
    np.testing.assert_allclose(hilbert.spost(b) @ hilbert.vec(rho), hilbert.vec(rho @ b), atol=1e-12)
    np.testing.assert_array_equal(hilbert.unvec(hilbert.vec(rho)), rho)


def test_basis_states():
    assert hilbert.ground_state(2)[3, 3] == 1
    assert hilbert.excited_state(2)[0, 0] == 1
    assert hilbert.purity(hilbert.ground_state(3)) == 1


def test_trace_distance():
    assert hilbert.trace_distance(hilbert.ground_state(1), hilbert.excited_state(1)) == pytest.approx(1.0)
    assert hilbert.trace_distance(hilbert.ground_state(1), hilbert.ground_state(1)) == 0.0
