"""
Canonical stiffness tensors, one per anisotropy class, in their natural frames.

Values are dimensionless and chosen so every tensor is positive definite and
no accidental extra symmetry appears.
"""

import numpy as np

from .spectral import voigt_to_tensor
from .stiffness import isotropic_stiffness


def _voigt(entries):
    V = np.zeros((6, 6))
    for (i, j), value in entries.items():
        V[i - 1, j - 1] = V[j - 1, i - 1] = value
    return V


def isotropic(lam=2.0, mu=1.0):
    return isotropic_stiffness(lam, mu)


def transversely_isotropic(c11=6.0, c12=2.0, c13=1.5, c33=4.0, c44=1.2):
    """Hexagonal stiffness with axis ``e3`` and ``C66 = (C11 - C12)/2``."""
    V = _voigt(
        {
            (1, 1): c11, (2, 2): c11, (3, 3): c33,
            (1, 2): c12, (1, 3): c13, (2, 3): c13,
            (4, 4): c44, (5, 5): c44, (6, 6): 0.5 * (c11 - c12),
        }
    )
    return voigt_to_tensor(V)


def cubic(c11=4.0, c12=2.0, c44=1.5):
    V = _voigt(
        {
            (1, 1): c11, (2, 2): c11, (3, 3): c11,
            (1, 2): c12, (1, 3): c12, (2, 3): c12,
            (4, 4): c44, (5, 5): c44, (6, 6): c44,
        }
    )
    return voigt_to_tensor(V)


def tetragonal(c11=6.0, c12=2.0, c13=1.5, c33=5.0, c44=1.2, c66=1.7):
    V = _voigt(
        {
            (1, 1): c11, (2, 2): c11, (3, 3): c33,
            (1, 2): c12, (1, 3): c13, (2, 3): c13,
            (4, 4): c44, (5, 5): c44, (6, 6): c66,
        }
    )
    return voigt_to_tensor(V)


def trigonal(c11=6.0, c12=2.0, c13=1.5, c33=5.0, c44=1.2, c14=0.6):
    """Trigonal stiffness with 3-fold axis ``e3``: ``C24 = -C14``, ``C56 = C14``, ``C66 = (C11 - C12)/2``."""
    V = _voigt(
        {
            (1, 1): c11, (2, 2): c11, (3, 3): c33,
            (1, 2): c12, (1, 3): c13, (2, 3): c13,
            (4, 4): c44, (5, 5): c44, (6, 6): 0.5 * (c11 - c12),
            (1, 4): c14, (2, 4): -c14, (5, 6): c14,
        }
    )
    return voigt_to_tensor(V)


def orthotropic():
    V = _voigt(
        {
            (1, 1): 8.0, (2, 2): 7.0, (3, 3): 6.0,
            (1, 2): 2.0, (1, 3): 1.5, (2, 3): 1.8,
            (4, 4): 1.2, (5, 5): 1.7, (6, 6): 2.3,
        }
    )
    return voigt_to_tensor(V)


def monoclinic():
    """Monoclinic stiffness with mirror normal ``e3``."""
    V = _voigt(
        {
            (1, 1): 8.0, (2, 2): 7.0, (3, 3): 6.0,
            (1, 2): 2.0, (1, 3): 1.5, (2, 3): 1.8,
            (4, 4): 1.2, (5, 5): 1.7, (6, 6): 2.3,
            (1, 6): 0.3, (2, 6): -0.2, (3, 6): 0.25, (4, 5): 0.15,
        }
    )
    return voigt_to_tensor(V)


def triclinic(seed=7):
    """Random positive-definite stiffness (all 21 constants nonzero)."""
    rng = np.random.default_rng(seed)
    A = rng.normal(size=(6, 6))
    V = A @ A.T + 6.0 * np.eye(6)
    return voigt_to_tensor(V)


FIXTURES = {
    "isotropic": isotropic,
    "transversely_isotropic": transversely_isotropic,
    "cubic": cubic,
    "tetragonal": tetragonal,
    "trigonal": trigonal,
    "orthotropic": orthotropic,
    "monoclinic": monoclinic,
    "triclinic": triclinic,
}
