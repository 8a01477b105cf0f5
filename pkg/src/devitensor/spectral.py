"""
Spectral decomposition of symmetric tensors.

Symmetric 3x3 tensors are diagonalized with cyclic Jacobi rotations.
Fourth-order tensors with minor and major symmetries are handled through
the Kelvin (Mandel) mapping onto a symmetric 6x6 matrix whose
eigenvectors map back to second-order eigentensors.

Kelvin index order is 11, 22, 33, 23, 13, 12.
"""

from dataclasses import dataclass

import numpy as np

from .errors import NoConvergence, NotSymmetric, SymmetryViolation, ValidationError
from .tensor import TOL_SYM, as_tensor, norm

JACOBI_TOL = 1e-14
JACOBI_MAX_SWEEPS = 50
CLUSTER_GAP = 1e-8

KELVIN_PAIRS = ((0, 0), (1, 1), (2, 2), (1, 2), (0, 2), (0, 1))
KELVIN_WEIGHTS = np.array([1.0, 1.0, 1.0, np.sqrt(2.0), np.sqrt(2.0), np.sqrt(2.0)])
KELVIN_WEIGHTS.flags.writeable = False

# 0-based Kelvin/Voigt position of the index pair (i, j)
KELVIN_INDEX = np.array([[0, 5, 4], [5, 1, 3], [4, 3, 2]])
KELVIN_INDEX.flags.writeable = False


def jacobi_eigh(A, tol=JACOBI_TOL, max_sweeps=JACOBI_MAX_SWEEPS):
    """
    Eigen-decomposition of a real symmetric matrix by cyclic Jacobi sweeps.

    Parameters
    ----------
    A : array_like, shape (n, n)
        Symmetric matrix. Only symmetric input gives meaningful output.
    tol : float
        Stop once the off-diagonal Frobenius norm is below ``tol * ||A||``.
    max_sweeps : int
        Maximum number of full sweeps over the upper triangle.

    Returns
    -------
    w : numpy.ndarray, shape (n,)
        Eigenvalues, unsorted (diagonal of the converged matrix).
    V : numpy.ndarray, shape (n, n)
        Orthonormal eigenvectors as columns, ``A V = V diag(w)``.
    """
    A = np.array(A, dtype=float)
    n = A.shape[0]
    V = np.eye(n)
    scale = np.linalg.norm(A)
    if scale == 0.0:
        return np.zeros(n), V
    for _ in range(max_sweeps):
        off = _off_norm(A)
        if off <= tol * scale:
            return np.diag(A).copy(), V
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = A[p, q]
                if apq == 0.0:
                    continue
                h = A[q, q] - A[p, p]
                if abs(h) + 100.0 * abs(apq) == abs(h):
                    t = apq / h
                else:
                    theta = 0.5 * h / apq
                    t = 1.0 / (abs(theta) + np.sqrt(theta * theta + 1.0))
                    if theta < 0.0:
                        t = -t
                c = 1.0 / np.sqrt(t * t + 1.0)
                s = t * c
                # A <- J^T A J with the rotation acting on rows/cols p, q
                ap = A[:, p].copy()
                aq = A[:, q].copy()
                A[:, p] = c * ap - s * aq
                A[:, q] = s * ap + c * aq
                ap = A[p, :].copy()
                aq = A[q, :].copy()
                A[p, :] = c * ap - s * aq
                A[q, :] = s * ap + c * aq
                A[p, q] = A[q, p] = 0.0
                vp = V[:, p].copy()
                vq = V[:, q].copy()
                V[:, p] = c * vp - s * vq
                V[:, q] = s * vp + c * vq
    off = _off_norm(A)
    if off <= tol * scale:
        return np.diag(A).copy(), V
    raise NoConvergence(f"Jacobi did not converge in {max_sweeps} sweeps (off-norm {off:.3e})")


def _off_norm(A):
    return float(np.sqrt(2.0 * np.sum(np.triu(A, 1) ** 2)))


def _canonical_cluster_basis(U):
    """Deterministic orthonormal basis of span(U) built from projected unit vectors."""
    n, k = U.shape
    P = U @ U.T
    proj = [P[:, j] for j in range(n)]
    order = sorted(range(n), key=lambda j: (-round(np.linalg.norm(proj[j]), 12), j))
    basis = []
    for j in order:
        v = proj[j].copy()
        for b in basis:
            v -= (b @ v) * b
        nv = np.linalg.norm(v)
        if nv > 1e-6:
            basis.append(v / nv)
        if len(basis) == k:
            break
    return np.column_stack(basis)


def _fix_sign(v):
    i = int(np.argmax(np.abs(v)))
    return -v if v[i] < 0 else v


def _sorted_eigensystem(w, V, key, gap):
    idx = sorted(range(len(w)), key=key)
    w = w[idx]
    V = V[:, idx]
    # re-orthonormalize clusters of (numerically) equal eigenvalues
    start = 0
    n = len(w)
    while start < n:
        stop = start + 1
        while stop < n and abs(w[stop] - w[start]) < gap:
            stop += 1
        if stop - start > 1:
            V[:, start:stop] = _canonical_cluster_basis(V[:, start:stop])
        start = stop
    for i in range(n):
        V[:, i] = _fix_sign(V[:, i])
    return w, V


@dataclass(frozen=True)
class EigenSystem3:
    """Eigenvalues sorted by descending magnitude; eigenvectors are the columns of ``vectors``."""

    values: np.ndarray
    vectors: np.ndarray

    def reconstruct(self):
        return (self.vectors * self.values) @ self.vectors.T

    def vector(self, i):
        return self.vectors[:, i]


def eigen_sym3(T, tol=TOL_SYM, gap=CLUSTER_GAP):
    """
    Spectral decomposition ``T = sum_i lambda_i v_i ⊗ v_i`` of a symmetric 3x3 tensor.

    Eigenvalues are ordered by descending absolute value (positive first on
    ties).  Each eigenvector has its largest-magnitude component positive,
    except the third which is ``v1 × v2`` so the frame is right-handed.
    Eigenvectors of eigenvalues closer than ``gap * ||T||`` are replaced by a
    canonical orthonormal basis of their common eigenspace.
    """
    T = as_tensor(T)
    if T.shape != (3, 3):
        raise ValidationError("eigen_sym3 needs a 3x3 tensor")
    scale = norm(T)
    asym = float(np.max(np.abs(T - T.T)))
    if asym > tol * max(scale, np.finfo(float).tiny):
        raise NotSymmetric(f"tensor is not symmetric (residual {asym:.3e})")
    w, V = jacobi_eigh(0.5 * (T + T.T))
    rounding = 1e-12 * max(scale, np.finfo(float).tiny)
    w, V = _sorted_eigensystem(
        w, V, key=lambda i: (-round(abs(w[i]) / rounding), -np.sign(w[i]), i), gap=gap * scale
    )
    V[:, 2] = np.cross(V[:, 0], V[:, 1])
    return EigenSystem3(values=w, vectors=V)


def kelvin_vector(T):
    """Kelvin 6-vector of a symmetric second-order tensor (shear entries scaled by sqrt 2)."""
    T = as_tensor(T)
    return np.array([KELVIN_WEIGHTS[m] * T[i, j] for m, (i, j) in enumerate(KELVIN_PAIRS)])


def kelvin_unvector(v):
    v = np.asarray(v, dtype=float)
    if v.shape != (6,):
        raise ValidationError("Kelvin vector must have 6 entries")
    T = np.empty((3, 3))
    for i in range(3):
        for j in range(3):
            m = KELVIN_INDEX[i, j]
            T[i, j] = v[m] / KELVIN_WEIGHTS[m]
    return T


def stiffness_symmetry_residual(C):
    """
    Worst violation of ``C_ijkl = C_jikl = C_ijlk = C_klij``.

    Returns
    -------
    residual : float
        Largest absolute deviation.
    index : tuple of int
        0-based index quadruple where it occurs.
    """
    C = as_tensor(C)
    if C.ndim != 4:
        raise ValidationError("expected a fourth-order tensor")
    dev = np.maximum.reduce(
        [
            np.abs(C - C.transpose(1, 0, 2, 3)),
            np.abs(C - C.transpose(0, 1, 3, 2)),
            np.abs(C - C.transpose(2, 3, 0, 1)),
        ]
    )
    index = np.unravel_index(int(np.argmax(dev)), dev.shape)
    return float(dev[index]), tuple(int(i) for i in index)


def check_stiffness_symmetry(C, tol=TOL_SYM):
    C = as_tensor(C)
    residual, index = stiffness_symmetry_residual(C)
    if residual > tol * max(norm(C), np.finfo(float).tiny):
        raise SymmetryViolation(
            f"minor/major symmetry violated: residual {residual:.3e} at index {index}",
            index=index,
            residual=residual,
        )
    return C


def kelvin_map(C, tol=TOL_SYM):
    """
    Kelvin (Mandel) 6x6 matrix of a fourth-order tensor with minor and major symmetries.

    ``K[m, n] = w_m w_n C[pair_m, pair_n]`` with weights 1 for normal and
    sqrt 2 for shear pairs, so shear-shear entries carry a factor 2.  The
    mapping preserves the Frobenius norm.
    """
    C = check_stiffness_symmetry(C, tol)
    K = np.empty((6, 6))
    for m, (i, j) in enumerate(KELVIN_PAIRS):
        for n, (k, l) in enumerate(KELVIN_PAIRS):
            K[m, n] = KELVIN_WEIGHTS[m] * KELVIN_WEIGHTS[n] * C[i, j, k, l]
    return K


def kelvin_unmap(K, tol=TOL_SYM):
    """Inverse of :func:`kelvin_map`."""
    K = np.asarray(K, dtype=float)
    if K.shape != (6, 6):
        raise ValidationError(f"Kelvin matrix must be 6x6, got {K.shape}")
    asym = float(np.max(np.abs(K - K.T)))
    if asym > tol * max(np.linalg.norm(K), np.finfo(float).tiny):
        raise SymmetryViolation(f"Kelvin matrix is not symmetric (residual {asym:.3e})", residual=asym)
    W = np.outer(KELVIN_WEIGHTS, KELVIN_WEIGHTS)
    return (K / W)[KELVIN_INDEX[:, :, None, None], KELVIN_INDEX[None, None, :, :]]


def voigt_to_tensor(V, convention="stress"):
    """
    Fourth-order stiffness from a 6x6 Voigt matrix (index order 11, 22, 33, 23, 13, 12).

    ``convention="stress"`` is the usual stiffness convention
    ``C_voigt[I, J] = C_ijkl`` (no factors).  ``convention="strain"`` reads
    the matrix in strain form, where every shear index carries a factor 2
    (``C_voigt[I, J] = f_I f_J C_ijkl`` with ``f = 2`` for shear).
    """
    V = np.asarray(V, dtype=float)
    if V.shape != (6, 6):
        raise ValidationError(f"Voigt matrix must be 6x6, got {V.shape}")
    f = _voigt_factors(convention)
    return (V / np.outer(f, f))[KELVIN_INDEX[:, :, None, None], KELVIN_INDEX[None, None, :, :]]


def tensor_to_voigt(C, convention="stress"):
    C = as_tensor(C)
    f = _voigt_factors(convention)
    V = np.empty((6, 6))
    for m, (i, j) in enumerate(KELVIN_PAIRS):
        for n, (k, l) in enumerate(KELVIN_PAIRS):
            V[m, n] = f[m] * f[n] * C[i, j, k, l]
    return V


def _voigt_factors(convention):
    if convention == "stress":
        return np.ones(6)
    if convention == "strain":
        return np.array([1.0, 1.0, 1.0, 2.0, 2.0, 2.0])
    raise ValidationError(f"unknown Voigt convention {convention!r}")


@dataclass(frozen=True)
class EigentensorSystem:
    """Eigenstiffnesses (descending) and their second-order eigentensors ``M_i``."""

    eigenstiffnesses: np.ndarray
    eigentensors: np.ndarray  # shape (6, 3, 3)

    def reconstruct(self):
        return np.einsum("a,aij,akl->ijkl", self.eigenstiffnesses, self.eigentensors, self.eigentensors)


def eigentensors(C, tol=TOL_SYM, gap=CLUSTER_GAP):
    """Eigenstiffnesses and eigentensors via the 6x6 Kelvin matrix."""
    K = kelvin_map(C, tol)
    w, V = jacobi_eigh(K)
    w, V = _sorted_eigensystem(w, V, key=lambda i: (-w[i], i), gap=gap * np.linalg.norm(K))
    M = np.array([kelvin_unvector(V[:, i]) for i in range(6)])
    return EigentensorSystem(eigenstiffnesses=w, eigentensors=M)
