"""
Dense three-dimensional tensors of order 0 to 4.

Tensors are plain ``numpy.ndarray`` objects of shape ``(3,) * q``.  Index
order is row-major: the first index varies slowest, so ``T[i, j, k, l]``
holds the coefficient :math:`T_{ijkl}`.  All slot numbers used by this
module are 0-based.
"""

import itertools
import math

import numpy as np

from .errors import (
    InvalidSlots,
    NotADeviator,
    NotOrthogonal,
    OrderOverflow,
    OrderUnderflow,
    ValidationError,
)

MAX_ORDER = 4

TOL_SYM = 1e-10
TOL_TRACE = 1e-10
TOL_ORTH = 1e-10

I = np.eye(3)
I.flags.writeable = False


def _levi_civita():
    eps = np.zeros((3, 3, 3))
    for i, j, k in ((0, 1, 2), (1, 2, 0), (2, 0, 1)):
        eps[i, j, k] = 1.0
        eps[i, k, j] = -1.0
    return eps


EPSILON = _levi_civita()
EPSILON.flags.writeable = False


def order(T):
    return np.ndim(T)


def as_tensor(T):
    """Validate and return ``T`` as a float array of shape ``(3,) * q``."""
    A = np.asarray(T, dtype=float)
    if A.ndim > MAX_ORDER:
        raise OrderOverflow(f"order {A.ndim} exceeds the supported maximum {MAX_ORDER}")
    if A.shape != (3,) * A.ndim:
        raise ValidationError(f"expected shape {(3,) * A.ndim}, got {A.shape}")
    if not np.all(np.isfinite(A)):
        raise ValidationError("tensor has non-finite coefficients")
    return A


def norm(T):
    """Frobenius norm (square root of the full self-contraction)."""
    return float(np.sqrt(np.sum(np.square(T))))


def inner(A, B):
    """Full contraction of two tensors of equal order."""
    A = np.asarray(A, dtype=float)
    B = np.asarray(B, dtype=float)
    if A.shape != B.shape:
        raise ValidationError(f"shape mismatch {A.shape} vs {B.shape}")
    return float(np.sum(A * B))


def outer_product(A, B):
    """Tensor product; the result has order ``order(A) + order(B)``."""
    A = as_tensor(A)
    B = as_tensor(B)
    if A.ndim + B.ndim > MAX_ORDER:
        raise OrderOverflow(f"outer product would have order {A.ndim + B.ndim}")
    return np.multiply.outer(A, B)


def contract_single(A, B):
    """Single contraction: sum over the last index of ``A`` and first of ``B``."""
    A = as_tensor(A)
    B = as_tensor(B)
    if A.ndim < 1 or B.ndim < 1:
        raise OrderUnderflow("single contraction needs order >= 1 on both sides")
    return np.tensordot(A, B, axes=1)


def contract_double(A, B):
    """Double contraction ``A_{..kl} B_{kl..}``."""
    A = as_tensor(A)
    B = as_tensor(B)
    if A.ndim < 2 or B.ndim < 2:
        raise OrderUnderflow("double contraction needs order >= 2 on both sides")
    return np.tensordot(A, B, axes=2)


def trace(T, slots=(0, 1)):
    """
    Contract the index pair ``slots`` of ``T``.

    The default ``(0, 1)`` is the trace over the first two indices.
    """
    T = as_tensor(T)
    if T.ndim < 2:
        raise OrderUnderflow("trace needs order >= 2")
    a, b = slots
    if a == b or not (0 <= a < T.ndim and 0 <= b < T.ndim):
        raise InvalidSlots(f"invalid slot pair {slots} for order {T.ndim}")
    return np.trace(T, axis1=a, axis2=b)


def determinant(T):
    """Determinant of a second-order tensor by cofactor expansion."""
    T = as_tensor(T)
    if T.ndim != 2:
        raise ValidationError("determinant needs a second-order tensor")
    return float(
        T[0, 0] * (T[1, 1] * T[2, 2] - T[1, 2] * T[2, 1])
        - T[0, 1] * (T[1, 0] * T[2, 2] - T[1, 2] * T[2, 0])
        + T[0, 2] * (T[1, 0] * T[2, 1] - T[1, 1] * T[2, 0])
    )


def symmetrize(T):
    """Totally symmetric part: the average over all index permutations."""
    T = as_tensor(T)
    q = T.ndim
    if q < 2:
        return T.copy()
    perms = list(itertools.permutations(range(q)))
    return sum(np.transpose(T, p) for p in perms) / len(perms)


def asymmetric_part(T):
    T = as_tensor(T)
    return T - symmetrize(T)


def symmetry_residual(T):
    """Largest deviation of ``T`` from its totally symmetric part."""
    T = as_tensor(T)
    if T.ndim < 2:
        return 0.0
    return float(np.max(np.abs(T - symmetrize(T))))


def traceless_symmetric_part(T):
    r"""
    Symmetric traceless part :math:`\lfloor T \rfloor` (a deviator).

    The tensor is symmetrized and the isotropic trace terms are removed.
    With ``S`` totally symmetric, ``t = tr S`` and ``s()`` denoting total
    symmetrization, the projection is

    * order 2: ``S - tr(S)/3 I``
    * order 3: ``S - 3/5 s(I t)``
    * order 4: ``S - 6/7 s(I t) + 3/35 s(I I) tr(t)``

    The coefficients follow from taking the trace of the ansatz:
    ``tr s(I x) = 5/3 x`` for a vector ``x``, and for a symmetric
    second-order ``t``: ``tr s(I t) = (7 t + tr(t) I) / 6`` and
    ``tr s(I I) = 5/3 I``.
    """
    S = symmetrize(T)
    q = S.ndim
    if q < 2:
        return S
    t = np.trace(S, axis1=0, axis2=1)
    if q == 2:
        return S - t / 3.0 * I
    if q == 3:
        return S - 0.6 * symmetrize(np.multiply.outer(I, t))
    tt = np.trace(t)
    return (
        S
        - 6.0 / 7.0 * symmetrize(np.multiply.outer(I, t))
        + 3.0 / 35.0 * tt * symmetrize(np.multiply.outer(I, I))
    )


def deviatoric(T):
    """Deviatoric part ``T - tr(T)/3 I`` of a second-order tensor (not symmetrized)."""
    T = as_tensor(T)
    if T.ndim != 2:
        raise ValidationError("deviatoric part is defined here for order 2 only")
    return T - np.trace(T) / 3.0 * I


def max_trace(T):
    """Largest absolute entry over all pairwise traces of ``T``."""
    T = as_tensor(T)
    worst = 0.0
    for a, b in itertools.combinations(range(T.ndim), 2):
        worst = max(worst, float(np.max(np.abs(np.trace(T, axis1=a, axis2=b)))))
    return worst


def is_deviator(T, tol=TOL_SYM, scale=None):
    """True if ``T`` is totally symmetric and traceless within ``tol * scale``."""
    T = as_tensor(T)
    ref = norm(T) if scale is None else scale
    bound = tol * max(ref, np.finfo(float).tiny)
    return symmetry_residual(T) <= bound and max_trace(T) <= bound


def check_deviator(T, tol=TOL_SYM, scale=None):
    """Return ``T`` as an array, raising :class:`NotADeviator` if invalid."""
    T = as_tensor(T)
    if not is_deviator(T, tol, scale):
        raise NotADeviator(
            f"not a deviator: symmetry residual {symmetry_residual(T):.3e}, "
            f"trace residual {max_trace(T):.3e}"
        )
    return T


def multi_outer(vectors):
    """Outer product of a sequence of vectors (order = number of vectors)."""
    out = np.array(1.0)
    for v in vectors:
        out = np.multiply.outer(out, np.asarray(v, dtype=float))
    return out


def isotropic_power(k):
    """Totally symmetric part of ``I ⊗ ... ⊗ I`` with ``k`` factors (order ``2k``)."""
    out = np.array(1.0)
    for _ in range(k):
        out = np.multiply.outer(out, I)
    return symmetrize(out)


def check_orthogonal(Q, tol=TOL_ORTH):
    Q = as_tensor(Q)
    if Q.ndim != 2:
        raise ValidationError("rotation must be a second-order tensor")
    err = float(np.max(np.abs(Q.T @ Q - I)))
    if err > tol:
        raise NotOrthogonal(f"Q^T Q deviates from identity by {err:.3e}")
    return Q


def rotate(T, Q, tol=TOL_ORTH):
    """
    Apply the orthogonal map ``Q`` to every index of ``T``.

    ``T'_{i1..iq} = Q_{i1 j1} ... Q_{iq jq} T_{j1..jq}``.  Reflections
    (``det Q = -1``) are accepted.
    """
    T = as_tensor(T)
    Q = check_orthogonal(Q, tol)
    out = T
    for axis in range(T.ndim):
        out = np.moveaxis(np.tensordot(Q, out, axes=([1], [axis])), 0, axis)
    return out


def rotation_matrix(axis, angle):
    """Proper rotation by ``angle`` (radians) about ``axis`` (Rodrigues)."""
    n = np.asarray(axis, dtype=float)
    n = n / np.linalg.norm(n)
    K = np.array([[0.0, -n[2], n[1]], [n[2], 0.0, -n[0]], [-n[1], n[0], 0.0]])
    return I + math.sin(angle) * K + (1.0 - math.cos(angle)) * (K @ K)


def random_rotation(rng):
    """Uniformly distributed proper rotation drawn from ``rng``."""
    A = rng.normal(size=(3, 3))
    Q, R = np.linalg.qr(A)
    Q = Q * np.sign(np.diag(R))
    if np.linalg.det(Q) < 0:
        Q[:, 0] = -Q[:, 0]
    return Q


def reflection(normal):
    """Householder reflection ``I - 2 n n`` across the plane with normal ``n``."""
    n = np.asarray(normal, dtype=float)
    n = n / np.linalg.norm(n)
    return I - 2.0 * np.outer(n, n)
