import numpy as np
import pytest

from devitensor.errors import NotSymmetric, SymmetryViolation, ValidationError
from devitensor.spectral import (
    eigen_sym3,
    eigentensors,
    jacobi_eigh,
    kelvin_map,
    kelvin_unmap,
    kelvin_unvector,
    kelvin_vector,
    tensor_to_voigt,
    voigt_to_tensor,
)
from devitensor.tensor import norm, random_rotation, rotate
from oracles import isotropic_entries, random_stiffness

ISO_K = np.block(
    [
        [np.array([[4.0, 2, 2], [2, 4, 2], [2, 2, 4]]), np.zeros((3, 3))],
        [np.zeros((3, 3)), 2 * np.eye(3)],
    ]
)


@pytest.mark.parametrize("n", [3, 6, 9])
def test_jacobi_matches_numpy(rng, n):
    for _ in range(20):
        A = rng.normal(size=(n, n))
        A = A + A.T
        w, V = jacobi_eigh(A)
        np.testing.assert_allclose(np.sort(w), np.linalg.eigvalsh(A), atol=1e-12)
        np.testing.assert_allclose(V.T @ V, np.eye(n), atol=1e-13)
        np.testing.assert_allclose(A @ V, V * w, atol=1e-12)


def test_jacobi_handles_tiny_off_diagonals():
    A = np.diag([1.0, 2.0, 3.0])
    A[0, 1] = A[1, 0] = 1e-200
    w, _ = jacobi_eigh(A)
    np.testing.assert_allclose(np.sort(w), [1, 2, 3])


def test_eigen_sym3_ordering_example():
    e = eigen_sym3(np.diag([3.0, -1.0, -2.0]))
    np.testing.assert_allclose(e.values, [3, -2, -1])
    for v, ref in zip(e.vectors.T, np.eye(3)[[0, 2, 1]]):
        assert abs(abs(v @ ref) - 1) < 1e-14


def test_eigen_sym3_identity():
    e = eigen_sym3(np.eye(3))
    np.testing.assert_allclose(e.values, 1)
    np.testing.assert_allclose(e.vectors.T @ e.vectors, np.eye(3), atol=1e-15)


def test_eigen_sym3_random(rng):
    for _ in range(200):
        T = rng.normal(size=(3, 3))
        T = T + T.T
        e = eigen_sym3(T)
        s = norm(T)
        assert norm(e.reconstruct() - T) <= 1e-10 * s
        np.testing.assert_allclose(e.vectors.T @ e.vectors, np.eye(3), atol=1e-10)
        assert np.linalg.det(e.vectors) == pytest.approx(1.0)
        assert np.all(np.diff(np.abs(e.values)) <= 1e-12)
        for i in range(3):
            assert norm(T @ e.vector(i) - e.values[i] * e.vector(i)) <= 1e-10 * s
        Q = random_rotation(rng)
        np.testing.assert_allclose(eigen_sym3(rotate(T, Q)).values, e.values, atol=1e-10 * s)


def test_eigen_sym3_double_eigenvalue_is_deterministic(rng):
    Q = random_rotation(rng)
    T = rotate(np.diag([4.0, 1.0, 1.0]), Q)
    a = eigen_sym3(T)
    b = eigen_sym3(T.copy())
    np.testing.assert_array_equal(a.vectors, b.vectors)
    assert abs(abs(a.vector(0) @ Q[:, 0]) - 1) < 1e-12


def test_eigen_sym3_rejects_asymmetric():
    with pytest.raises(NotSymmetric):
        eigen_sym3(np.array([[1.0, 2, 0], [0, 1, 0], [0, 0, 1]]))
    with pytest.raises(ValidationError):
        eigen_sym3(np.eye(2))


def test_kelvin_shear_entry():
    C = np.zeros((3, 3, 3, 3))
    for idx in [(0, 1, 0, 1), (1, 0, 0, 1), (0, 1, 1, 0), (1, 0, 1, 0)]:
        C[idx] = 1.0
    K = kelvin_map(C)
    expected = np.zeros((6, 6))
    expected[5, 5] = 2.0
    np.testing.assert_allclose(K, expected, atol=1e-15)


def test_kelvin_isotropic():
    C = isotropic_entries(2.0, 1.0)
    np.testing.assert_allclose(kelvin_map(C), ISO_K)
    np.testing.assert_allclose(kelvin_unmap(ISO_K), C)


def test_kelvin_norm_and_inverse(rng):
    for _ in range(50):
        C = random_stiffness(rng)
        K = kelvin_map(C)
        np.testing.assert_allclose(K, K.T, atol=1e-12)
        assert np.linalg.norm(K) == pytest.approx(norm(C), rel=1e-12)
        np.testing.assert_allclose(kelvin_unmap(K), C, atol=1e-14)


def test_kelvin_vector_preserves_inner_products(rng):
    C = random_stiffness(rng)
    eps = rng.normal(size=(3, 3))
    eps = eps + eps.T
    sig = np.einsum("ijkl,kl->ij", C, eps)
    np.testing.assert_allclose(kelvin_vector(sig), kelvin_map(C) @ kelvin_vector(eps), atol=1e-12)
    assert kelvin_vector(sig) @ kelvin_vector(eps) == pytest.approx(np.sum(sig * eps))
    np.testing.assert_allclose(kelvin_unvector(kelvin_vector(eps)), eps)


def test_kelvin_reports_worst_index(rng):
    C = random_stiffness(rng)
    C[0, 1, 2, 2] += 1.0
    with pytest.raises(SymmetryViolation) as info:
        kelvin_map(C)
    assert info.value.index is not None


def test_eigentensors_isotropic():
    sys_ = eigentensors(isotropic_entries(2.0, 1.0))
    np.testing.assert_allclose(sys_.eigenstiffnesses, [8, 2, 2, 2, 2, 2], atol=1e-13)
    np.testing.assert_allclose(sys_.eigentensors[0], np.eye(3) / np.sqrt(3), atol=1e-13)


def test_eigentensors_zero():
    sys_ = eigentensors(np.zeros((3, 3, 3, 3)))
    np.testing.assert_array_equal(sys_.eigenstiffnesses, 0)


def test_eigentensors_random(rng):
    for _ in range(30):
        C = random_stiffness(rng)
        s = eigentensors(C)
        assert norm(s.reconstruct() - C) <= 1e-9 * norm(C)
        G = np.einsum("aij,bij->ab", s.eigentensors, s.eigentensors)
        np.testing.assert_allclose(G, np.eye(6), atol=1e-9)
        for lam, M in zip(s.eigenstiffnesses, s.eigentensors):
            np.testing.assert_allclose(np.einsum("ijkl,kl->ij", C, M), lam * M, atol=1e-9 * norm(C))
            np.testing.assert_allclose(M, M.T, atol=1e-14)
        Q = random_rotation(rng)
        np.testing.assert_allclose(eigentensors(rotate(C, Q)).eigenstiffnesses, s.eigenstiffnesses, atol=1e-10)


def test_voigt_conventions(rng):
    C = random_stiffness(rng)
    V = tensor_to_voigt(C)
    assert V[3, 3] == C[1, 2, 1, 2] and V[0, 5] == C[0, 0, 0, 1]
    np.testing.assert_allclose(voigt_to_tensor(V), C)
    Vs = tensor_to_voigt(C, "strain")
    assert Vs[3, 3] == pytest.approx(4 * C[1, 2, 1, 2])
    assert Vs[0, 3] == pytest.approx(2 * C[0, 0, 1, 2])
    np.testing.assert_allclose(voigt_to_tensor(Vs, "strain"), C)
    with pytest.raises(ValidationError):
        voigt_to_tensor(V, "engineering")
