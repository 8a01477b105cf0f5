"""
Deviatoric decomposition of stiffness tensors.

A stiffness ``C`` (minor and major symmetries, 21 independent entries)
splits into a totally symmetric part ``S`` and a remainder ``A``.  Both are
described by deviators: two scalars, two second-order deviators and one
fourth-order deviator.  In Lamé form

    C_ijkl = λ δ_ij δ_kl + μ (δ_ik δ_jl + δ_il δ_jk)
             + δ_ij D_kl + δ_kl D_ij
             + δ_ik Dh_jl + δ_il Dh_jk + δ_jk Dh_il + δ_jl Dh_ik
             + D4_ijkl

and equivalently as the sum of five mutually orthogonal parts

    C = D4 + 6 s(I Ds) + 3 s(I I) d + phi(Da) + ½ phi(I) dh

with ``d = (λ + 2μ)/3``, ``dh = 2(λ - μ)/3``, ``Ds = (D + 2 Dh)/3`` and
``Da = 2(D - Dh)/3``.  Here ``s`` is total symmetrization and ``phi`` maps a
symmetric second-order tensor onto the asymmetric part.
"""

import warnings
from dataclasses import dataclass

import numpy as np

from .errors import NonPositiveCompliance, NotInImage, SymmetryViolation, ValidationError
from .spectral import stiffness_symmetry_residual
from .tensor import I, as_tensor, deviatoric, isotropic_power, norm, symmetrize

TOL_ACCEPT = 1e-10
TOL_REPAIR = 1e-8

_II = np.einsum("ij,kl->ijkl", I, I)
_IK = np.einsum("ik,jl->ijkl", I, I)
_IL = np.einsum("il,jk->ijkl", I, I)
_SII = isotropic_power(2)


def isotropic_stiffness(lam, mu):
    """``λ δ_ij δ_kl + μ (δ_ik δ_jl + δ_il δ_jk)``."""
    return lam * _II + mu * (_IK + _IL)


def stiffness_symmetrize(C):
    """Average of ``C`` over the index swaps ``ij``, ``kl`` and ``(ij)(kl)``."""
    C = 0.5 * (C + C.transpose(1, 0, 2, 3))
    C = 0.5 * (C + C.transpose(0, 1, 3, 2))
    return 0.5 * (C + C.transpose(2, 3, 0, 1))


def as_stiffness(C, tol=TOL_ACCEPT, tol_repair=TOL_REPAIR):
    """
    Validate a stiffness tensor.

    A relative symmetry residual up to ``tol`` is accepted silently, up to
    ``tol_repair`` the tensor is symmetrized with a warning, and beyond
    that :class:`SymmetryViolation` is raised with the worst index.
    """
    C = as_tensor(C)
    if C.ndim != 4:
        raise ValidationError(f"stiffness must be a fourth-order tensor, got order {C.ndim}")
    residual, index = stiffness_symmetry_residual(C)
    scale = max(norm(C), np.finfo(float).tiny)
    if residual <= tol * scale:
        return C
    if residual <= tol_repair * scale:
        warnings.warn(
            f"stiffness symmetry residual {residual:.3e} at index {index}; symmetrizing",
            RuntimeWarning,
            stacklevel=2,
        )
        return stiffness_symmetrize(C)
    raise SymmetryViolation(
        f"stiffness symmetry violated: residual {residual:.3e} at index {index}",
        index=index,
        residual=residual,
    )


def split_sym_asym(C, tol=TOL_ACCEPT):
    """
    Totally symmetric part ``S`` and remainder ``A = C - S``.

    For a stiffness tensor ``S_ijkl = (C_ijkl + C_iklj + C_iljk) / 3`` and
    ``A_ijkl = (2 C_ijkl - C_iklj - C_iljk) / 3``.
    """
    C = as_stiffness(C, tol)
    S = symmetrize(C)
    return S, C - S


def asymmetric_part_formula(C):
    """``(2 C_ijkl - C_iklj - C_iljk) / 3`` evaluated directly."""
    C = np.asarray(C, dtype=float)
    return (2.0 * C - np.einsum("iklj->ijkl", C) - np.einsum("iljk->ijkl", C)) / 3.0


def phi(R):
    """
    Map a symmetric second-order tensor into the asymmetric part of stiffness space.

    ``phi(R)_ijkl = δ_ij R_kl + δ_kl R_ij
    - ½ (δ_ik R_jl + δ_jl R_ik + δ_il R_jk + δ_jk R_il)``
    """
    R = as_tensor(R)
    if R.ndim != 2:
        raise ValidationError("phi needs a second-order tensor")
    return (
        np.einsum("ij,kl->ijkl", I, R)
        + np.einsum("ij,kl->ijkl", R, I)
        - 0.5
        * (
            np.einsum("ik,jl->ijkl", I, R)
            + np.einsum("jl,ik->ijkl", I, R)
            + np.einsum("il,jk->ijkl", I, R)
            + np.einsum("jk,il->ijkl", I, R)
        )
    )


def phi_inverse(A, tol=1e-10):
    """
    Recover ``R`` from ``A = phi(R)``: ``R_ij = A_ijll - δ_ij A_kkll / 4``.

    Raises
    ------
    NotInImage
        If ``phi(R)`` does not reproduce ``A`` within ``tol * ||A||``.
    """
    A = as_tensor(A)
    if A.ndim != 4:
        raise ValidationError("phi_inverse needs a fourth-order tensor")
    R = np.einsum("ijll->ij", A) - 0.25 * np.einsum("kkll", A) * I
    res = norm(phi(R) - A)
    if res > tol * max(norm(A), np.finfo(float).tiny):
        raise NotInImage(f"tensor is not in the image of phi (residual {res:.3e})")
    return R


@dataclass(frozen=True)
class StiffnessDecomposition:
    """
    Lamé constants, two second-order deviators and a fourth-order deviator.

    ``D`` and ``Dhat`` are the deviators of the Lamé form (see module
    docstring); the properties give the scalars and deviators of the
    orthogonal five-part form.
    """

    lam: float
    mu: float
    D: np.ndarray
    Dhat: np.ndarray
    D4: np.ndarray

    @property
    def d(self):
        return (self.lam + 2.0 * self.mu) / 3.0

    @property
    def dhat(self):
        return 2.0 * (self.lam - self.mu) / 3.0

    @property
    def D_sym(self):
        return (self.D + 2.0 * self.Dhat) / 3.0

    @property
    def D_asym(self):
        return 2.0 * (self.D - self.Dhat) / 3.0

    def parts(self):
        """The five mutually orthogonal parts, keyed by name."""
        return {
            "D4": self.D4.copy(),
            "sym2": 6.0 * symmetrize(np.multiply.outer(I, self.D_sym)),
            "sym0": 3.0 * self.d * _SII,
            "asym2": phi(self.D_asym),
            "asym0": 0.5 * self.dhat * phi(I),
        }

    def reconstruct(self):
        return sum(self.parts().values())

    def to_dict(self):
        return {
            "lambda": float(self.lam),
            "mu": float(self.mu),
            "D": self.D.tolist(),
            "Dhat": self.Dhat.tolist(),
            "D4": self.D4.tolist(),
        }

    @classmethod
    def from_dict(cls, data):
        return cls(
            lam=float(data["lambda"]),
            mu=float(data["mu"]),
            D=np.asarray(data["D"], dtype=float),
            Dhat=np.asarray(data["Dhat"], dtype=float),
            D4=np.asarray(data["D4"], dtype=float),
        )


def lame_constants(C):
    """``λ = (2 C_iikk - C_ikik) / 15`` and ``μ = (3 C_ikik - C_iikk) / 30``."""
    c1 = np.einsum("iikk", C)
    c2 = np.einsum("ikik", C)
    return float((2.0 * c1 - c2) / 15.0), float((3.0 * c2 - c1) / 30.0)


def decompose_stiffness(C, tol=TOL_ACCEPT, tol_repair=TOL_REPAIR):
    """
    Deviatoric decomposition of a stiffness tensor.

    With the dilatational tensor ``d_ij = C_kkij`` and the Voigt tensor
    ``v_ij = C_kikj``:

    * ``D = 5/7 dev(d) - 4/7 dev(v)``
    * ``Dhat = 3/7 dev(v) - 2/7 dev(d)``
    * ``D4`` is what remains after subtracting the Lamé-form terms.

    Parameters
    ----------
    C : array_like, shape (3, 3, 3, 3)
        Stiffness tensor.
    tol, tol_repair : float
        Symmetry acceptance thresholds, see :func:`as_stiffness`.

    Returns
    -------
    StiffnessDecomposition
    """
    C = as_stiffness(C, tol, tol_repair)
    lam, mu = lame_constants(C)
    dil = deviatoric(np.einsum("kkij->ij", C))
    voigt = deviatoric(np.einsum("kikj->ij", C))
    D = 5.0 / 7.0 * dil - 4.0 / 7.0 * voigt
    Dhat = 3.0 / 7.0 * voigt - 2.0 / 7.0 * dil
    lower = (
        isotropic_stiffness(lam, mu)
        + np.einsum("ij,kl->ijkl", I, D)
        + np.einsum("ij,kl->ijkl", D, I)
        + np.einsum("ik,jl->ijkl", I, Dhat)
        + np.einsum("il,jk->ijkl", I, Dhat)
        + np.einsum("jk,il->ijkl", I, Dhat)
        + np.einsum("jl,ik->ijkl", I, Dhat)
    )
    # the remainder is totally symmetric and traceless up to rounding; project to make it exact
    D4 = symmetrize(C - lower)
    return StiffnessDecomposition(lam=lam, mu=mu, D=D, Dhat=Dhat, D4=D4)


def reconstruct_stiffness(dec):
    return dec.reconstruct()


def youngs_modulus(dec, direction, tol=1e-10):
    """
    Directional modulus from the decomposition.

    Evaluates ``1/E(d) = (2μ + λ) + 6 D : (d ⊗ d) + (d ⊗ d) : D4 : (d ⊗ d)``
    with ``E_RI = 1 / (2μ + λ)`` as the isotropic reference.  For an
    isotropic tensor this gives ``E = 1 / (2μ + λ)``, which is not the
    classical Young's modulus ``μ (3λ + 2μ) / (λ + μ)``; the expression is
    kept as stated and should be read as a normalized directional measure.

    Raises
    ------
    NonPositiveCompliance
        If ``1/E(d) <= 0``.
    """
    d = np.asarray(direction, dtype=float)
    if d.shape != (3,) or abs(np.linalg.norm(d) - 1.0) > tol:
        raise ValidationError("direction must be a unit 3-vector")
    dd = np.outer(d, d)
    inv = (2.0 * dec.mu + dec.lam) + 6.0 * float(np.sum(dec.D * dd)) + float(
        np.einsum("ij,ijkl,kl", dd, dec.D4, dd)
    )
    if inv <= 0.0:
        raise NonPositiveCompliance(f"1/E = {inv:.6g} is not positive for direction {d.tolist()}")
    return 1.0 / inv
