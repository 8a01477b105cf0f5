"""
Second-order tensors: deviatoric decomposition and the link between the
two multipoles of a symmetric tensor and its eigensystem.

Any ``T`` splits as ``T_ij = d δ_ij + ε_ijk d_k + D_ij`` with a scalar
``d``, an axial vector ``d_k`` and a deviator ``D``.  For a deviator with
eigenvalues ``|λ1| >= |λ2| >= |λ3|`` the multipoles lie in the plane of the
first two eigenvectors, mirrored about the first one.
"""

import enum
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateSpectrum, ValidationError
from .multipole import MultipoleForm, multipoles
from .spectral import EigenSystem3, eigen_sym3
from .tensor import EPSILON, I, as_tensor, norm

TOL_GAP = 1e-8


@dataclass(frozen=True)
class SecondOrderDecomposition:
    d: float
    dvec: np.ndarray
    D: np.ndarray

    def reconstruct(self):
        return self.d * I + np.einsum("ijk,k->ij", EPSILON, self.dvec) + self.D


def decompose2(T):
    """
    Split a second-order tensor into its scalar, vector and deviator parts.

    ``d = T_ii / 3``, ``d_i = ½ ε_ijk T_jk`` and ``D = ⌊T⌋``.
    """
    T = as_tensor(T)
    if T.ndim != 2:
        raise ValidationError("decompose2 needs a second-order tensor")
    d = float(np.trace(T)) / 3.0
    dvec = 0.5 * np.einsum("ijk,jk->i", EPSILON, T)
    S = 0.5 * (T + T.T)
    D = S - d * I
    return SecondOrderDecomposition(d=d, dvec=dvec, D=D)


def multipoles_from_eigen(l1, l2, a=None, tol_gap=TOL_GAP):
    """
    Closed-form multipoles of ``diag(l1, l2, l3)`` with ``l3 = -l1 - l2``.

    Writing ``m1 = (x, y, 0)`` and ``m2 = (x, -y, 0)`` and matching
    ``a ⌊m1 ⊗ m2⌋`` to the diagonal gives ``a (x² - 1/3) = l1``,
    ``a (-y² - 1/3) = l2`` and ``-a/3 = l3``.  Adding the first two and
    using ``x² + y² = 1`` forces ``a = l1 - l2``; then
    ``x² = (2 l1 + l2) / a`` and ``y² = -(l1 + 2 l2) / a``.

    If ``l1 < 0`` the formula gives ``a < 0``; the sign is moved into
    ``m1`` so the returned amplitude is non-negative.

    Parameters
    ----------
    l1, l2 : float
        Largest and middle eigenvalue by absolute value.
    a : float, optional
        If given, must equal ``|l1 - l2|``.
    tol_gap : float
        Relative threshold below which the spectrum counts as degenerate.

    Returns
    -------
    MultipoleForm
        Directions are expressed in the eigenframe.
    """
    l1 = float(l1)
    l2 = float(l2)
    l3 = -l1 - l2
    if abs(l2) > abs(l1) * (1 + 1e-12) or abs(l3) > abs(l1) * (1 + 1e-12):
        raise ValidationError("l1 must have the largest absolute value")
    amp = l1 - l2
    scale = max(abs(l1), abs(l2), abs(l3))
    if scale == 0.0 or abs(amp) <= tol_gap * scale:
        raise DegenerateSpectrum("triple eigenvalue: multipoles are undefined")
    if a is not None and abs(abs(a) - abs(amp)) > 1e-10 * abs(amp):
        raise ValidationError(f"amplitude {a} inconsistent with eigenvalues (expected {abs(amp)})")
    x2 = min(max((2.0 * l1 + l2) / amp, 0.0), 1.0)
    y2 = min(max(-(l1 + 2.0 * l2) / amp, 0.0), 1.0)
    m1 = np.array([np.sqrt(x2), np.sqrt(y2), 0.0])
    m2 = np.array([np.sqrt(x2), -np.sqrt(y2), 0.0])
    if amp < 0:
        m1 = -m1
    return MultipoleForm(order=2, amplitude=abs(amp), directions=np.array([m1, m2]) + 0.0)


def multipole_angle(l1, l2):
    """Angle between the first multipole and the first eigenvector."""
    return float(np.arccos(np.sqrt(np.clip((2.0 * l1 + l2) / (l1 - l2), 0.0, 1.0))))


class EigenMultipoleCase(enum.Enum):
    SPHERICAL = "spherical"
    DOUBLE_EIGENVALUE = "double_eigenvalue"
    GENERIC = "generic"


@dataclass(frozen=True)
class EigenMultipoleRelation:
    """
    Case label plus the data that supports it.

    ``bisector_residual`` is the sine of the worst angle between a
    multipole bisector and its eigenvector (``nan`` outside the generic case).
    """

    case: EigenMultipoleCase
    multipoles: MultipoleForm
    eigen: EigenSystem3
    bisector_residual: float = float("nan")


def _line_sine(u, v):
    return float(np.linalg.norm(np.cross(u, v)) / (np.linalg.norm(u) * np.linalg.norm(v)))


def bisectors(m1, m2):
    """
    The two bisecting lines of the multipoles, the closer one first.

    The multipoles are only defined up to a common sign flip, so both sums
    are formed and the one making the smaller angle with the multipole
    lines is returned first.
    """
    b_plus = m1 + m2
    b_minus = m1 - m2
    b_plus = b_plus / np.linalg.norm(b_plus)
    b_minus = b_minus / np.linalg.norm(b_minus)
    if abs(b_plus @ m1) >= abs(b_minus @ m1):
        return b_plus, b_minus
    return b_minus, b_plus


def classify_eigen_multipole(T, mp=None, tol_gap=TOL_GAP, seed=0):
    """
    Relate the multipoles of ``dev(T)`` to the eigensystem of ``T``.

    Case 1 (spherical): ``a = 0``.  Case 2 (double eigenvalue): the two
    multipoles coincide up to sign and equal the eigenvector of the
    single eigenvalue.  Case 3 (generic): the closer bisector of the
    multipoles is the eigenvector of the largest ``|λ|`` and the other
    bisector that of the middle one.  Ties go to the more degenerate case.
    """
    T = as_tensor(T)
    if T.ndim != 2:
        raise ValidationError("expected a second-order tensor")
    dec = decompose2(T)
    D = dec.D
    scale = max(norm(T), np.finfo(float).tiny)
    eig = eigen_sym3(D)
    if mp is None:
        mp = multipoles(D, seed=seed, tol_zero=tol_gap, scale=scale)
    if mp.is_zero or mp.amplitude <= tol_gap * scale:
        return EigenMultipoleRelation(EigenMultipoleCase.SPHERICAL, mp, eig)
    m1, m2 = mp.directions
    gap = 0.5 * mp.amplitude * (1.0 - abs(float(m1 @ m2)))
    if gap <= tol_gap * max(norm(D), np.finfo(float).tiny):
        return EigenMultipoleRelation(EigenMultipoleCase.DOUBLE_EIGENVALUE, mp, eig)
    near, far = bisectors(m1, m2)
    res = max(_line_sine(near, eig.vector(0)), _line_sine(far, eig.vector(1)))
    return EigenMultipoleRelation(EigenMultipoleCase.GENERIC, mp, eig, bisector_residual=res)
