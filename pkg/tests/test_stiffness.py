import warnings

import numpy as np
import pytest

from devitensor.errors import NonPositiveCompliance, NotInImage, SymmetryViolation, ValidationError
from devitensor.fixtures import FIXTURES, cubic
from devitensor.spectral import eigentensors
from devitensor.stiffness import (
    StiffnessDecomposition,
    as_stiffness,
    asymmetric_part_formula,
    decompose_stiffness,
    isotropic_stiffness,
    phi,
    phi_inverse,
    split_sym_asym,
    youngs_modulus,
)
from devitensor.tensor import I, is_deviator, norm, random_rotation, rotate, symmetrize
from oracles import brute_symmetrize, isotropic_entries, random_stiffness

ZERO2 = np.zeros((3, 3))
ZERO4 = np.zeros((3, 3, 3, 3))


def test_isotropic_matches_loop_oracle():
    np.testing.assert_allclose(isotropic_stiffness(2.0, 1.0), isotropic_entries(2.0, 1.0))


def test_phi_of_identity():
    P = phi(I)
    assert P[0, 0, 0, 0] == pytest.approx(0.0)
    assert P[0, 0, 1, 1] == pytest.approx(2.0)
    assert P[0, 1, 0, 1] == pytest.approx(-1.0)
    ref = 2 * np.einsum("ij,kl->ijkl", I, I) - np.einsum("ik,jl->ijkl", I, I) - np.einsum("il,jk->ijkl", I, I)
    np.testing.assert_allclose(P, ref, atol=1e-15)
    np.testing.assert_array_equal(phi(ZERO2), ZERO4)


def test_phi_roundtrip_and_equivariance(rng):
    for _ in range(20):
        R = rng.normal(size=(3, 3))
        R = R + R.T
        np.testing.assert_allclose(phi_inverse(phi(R)), R, atol=1e-12)
        assert norm(symmetrize(phi(R))) <= 1e-12 * norm(R)
        Q = random_rotation(rng)
        np.testing.assert_allclose(phi(Q @ R @ Q.T), rotate(phi(R), Q), atol=1e-12)


def test_phi_inverse_rejects_non_image(rng):
    with pytest.raises(NotInImage):
        phi_inverse(random_stiffness(rng))


def test_split_sym_asym(rng):
    C = random_stiffness(rng)
    S, A = split_sym_asym(C)
    np.testing.assert_allclose(S, brute_symmetrize(C), atol=1e-14)
    np.testing.assert_allclose(S, (C + np.einsum("iklj->ijkl", C) + np.einsum("iljk->ijkl", C)) / 3, atol=1e-14)
    np.testing.assert_allclose(S + A, C, atol=1e-15)
    assert norm(symmetrize(A)) <= 1e-12 * norm(C)
    np.testing.assert_allclose(asymmetric_part_formula(C), A, atol=1e-14)
    S, A = split_sym_asym(symmetrize(C))
    assert norm(A) <= 1e-14


def test_isotropic_decomposition():
    dec = decompose_stiffness(isotropic_stiffness(2.0, 1.0))
    assert dec.lam == pytest.approx(2.0) and dec.mu == pytest.approx(1.0)
    for T in (dec.D, dec.Dhat, dec.D4):
        assert norm(T) < 1e-14


def test_cubic_decomposition():
    dec = decompose_stiffness(cubic(4.0, 2.0, 1.5))
    assert norm(dec.D) < 1e-14 and norm(dec.Dhat) < 1e-14
    assert norm(dec.D4) > 0.1
    # C_iikk = 3 C11 + 6 C12, C_ikik = 3 C11 + 6 C44
    assert dec.lam == pytest.approx((2 * 24.0 - 21.0) / 15)
    assert dec.mu == pytest.approx((3 * 21.0 - 24.0) / 30)


def test_reconstruction_examples():
    zero = StiffnessDecomposition(0.0, 0.0, ZERO2, ZERO2, ZERO4)
    np.testing.assert_array_equal(zero.reconstruct(), ZERO4)
    C = StiffnessDecomposition(2.0, 1.0, ZERO2, ZERO2, ZERO4).reconstruct()
    assert C[0, 0, 0, 0] == pytest.approx(4.0)
    assert C[0, 0, 1, 1] == pytest.approx(2.0)
    assert C[0, 1, 0, 1] == pytest.approx(1.0)


@pytest.mark.parametrize("name", sorted(FIXTURES))
def test_fixture_roundtrip(name):
    C = FIXTURES[name]()
    dec = decompose_stiffness(C)
    assert norm(dec.reconstruct() - C) <= 1e-12 * norm(C)
    assert eigentensors(C).eigenstiffnesses[-1] > 0


def test_parts_are_deviators_and_orthogonal(rng):
    for _ in range(20):
        C = random_stiffness(rng)
        dec = decompose_stiffness(C)
        s = norm(C)
        for T in (dec.D, dec.Dhat, dec.D4):
            assert is_deviator(T, scale=s)
        parts = list(dec.parts().values())
        for i in range(5):
            for j in range(i + 1, 5):
                assert abs(np.sum(parts[i] * parts[j])) <= 1e-12 * s**2


def test_equivariance(rng):
    C = random_stiffness(rng)
    Q = random_rotation(rng)
    a, b = decompose_stiffness(C), decompose_stiffness(rotate(C, Q))
    assert b.lam == pytest.approx(a.lam) and b.mu == pytest.approx(a.mu)
    np.testing.assert_allclose(rotate(a.D, Q), b.D, atol=1e-12)
    np.testing.assert_allclose(rotate(a.Dhat, Q), b.Dhat, atol=1e-12)
    np.testing.assert_allclose(rotate(a.D4, Q), b.D4, atol=1e-12)


def test_dict_roundtrip(rng):
    dec = decompose_stiffness(random_stiffness(rng))
    again = StiffnessDecomposition.from_dict(dec.to_dict())
    np.testing.assert_array_equal(again.reconstruct(), dec.reconstruct())


def test_symmetry_acceptance(rng):
    C = FIXTURES["orthotropic"]()
    noisy = C.copy()
    noisy[0, 0, 1, 2] += 1e-9 * norm(C)
    with pytest.warns(RuntimeWarning):
        fixed = as_stiffness(noisy)
    assert norm(fixed - C) < 1e-8 * norm(C)
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        as_stiffness(C)
    bad = C.copy()
    bad[0, 0, 1, 2] += 1e-3
    with pytest.raises(SymmetryViolation) as info:
        decompose_stiffness(bad)
    assert info.value.index is not None and info.value.residual > 0


def test_young_isotropic():
    dec = decompose_stiffness(isotropic_stiffness(2.0, 1.0))
    for d in np.eye(3).tolist() + [list(np.ones(3) / np.sqrt(3))]:
        assert youngs_modulus(dec, d) == pytest.approx(0.25)


def test_young_cubic_axes_and_parity(rng):
    dec = decompose_stiffness(cubic())
    E = [youngs_modulus(dec, e) for e in np.eye(3)]
    assert E[0] == pytest.approx(E[1]) == pytest.approx(E[2])
    dec = decompose_stiffness(random_stiffness(rng) + isotropic_stiffness(3.0, 3.0))
    for _ in range(10):
        d = rng.normal(size=3)
        d /= np.linalg.norm(d)
        assert youngs_modulus(dec, d) == pytest.approx(youngs_modulus(dec, -d))


def test_young_errors():
    dec = decompose_stiffness(isotropic_stiffness(2.0, 1.0))
    with pytest.raises(ValidationError):
        youngs_modulus(dec, [1.0, 1.0, 0.0])
    neg = decompose_stiffness(isotropic_stiffness(-2.0, -1.0))
    with pytest.raises(NonPositiveCompliance):
        youngs_modulus(neg, [1.0, 0.0, 0.0])
