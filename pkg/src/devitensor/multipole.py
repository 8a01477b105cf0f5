"""
Maxwell multipoles of second- and fourth-order deviators.

A deviator of order ``q`` is written as ``D = a ⌊n1 ⊗ ... ⊗ nq⌋`` with
``a >= 0`` and unit vectors ``n_r``.  The directions come from the ``2q``
roots of a complex polynomial built from the deviator coefficients.  A
root ``x = tan(theta/2) exp(-i phi)`` corresponds to the direction with
polar angle ``theta`` and azimuth ``phi``; roots come in pairs
``x, -1/conj(x)`` describing ``n`` and ``-n``.
"""

import itertools
import math
from dataclasses import dataclass

import numpy as np

from .errors import (
    PairingFailure,
    ReconstructionFailure,
    UnsupportedOrder,
    ValidationError,
    ZeroPolynomial,
)
from .polyroots import TOL_ZERO_COEF, backward_error, newton_polish, polynomial_roots
from .tensor import TOL_SYM, check_deviator, multi_outer, norm, traceless_symmetric_part

TOL_ROOT = 1e-6
TOL_REC = 1e-8
# cluster radii (chord distance between directions) tried for multiple roots
CLUSTER_RADII = (0.0, 1e-8, 1e-6, 1e-4, 1e-3)

_S35_8 = math.sqrt(35.0 / 8.0)
_S7_2 = math.sqrt(3.5)
_S7 = math.sqrt(7.0)
_S2 = math.sqrt(2.0)
_S3_2 = math.sqrt(1.5)


@dataclass(frozen=True)
class MultipoleForm:
    """
    Amplitude and unit directions of a deviator.

    ``directions`` has shape ``(q, 3)``; it is ``None`` when the amplitude
    is zero and the directions are undefined.
    """

    order: int
    amplitude: float
    directions: np.ndarray = None

    def tensor(self):
        """The deviator ``a ⌊n1 ⊗ ... ⊗ nq⌋``."""
        if self.directions is None:
            return np.zeros((3,) * self.order)
        return self.amplitude * traceless_symmetric_part(multi_outer(self.directions))

    @property
    def is_zero(self):
        return self.directions is None

    def to_dict(self):
        return {
            "order": self.order,
            "amplitude": float(self.amplitude),
            "directions": None if self.directions is None else self.directions.tolist(),
        }


def multipole_coefficients(D):
    """
    The complex coefficients ``a_{q,r}``, ``r = 0..q``, of a deviator of order 2 or 4.
    """
    D = np.asarray(D, dtype=float)
    if D.ndim == 2:
        return np.array(
            [
                -_S3_2 * (D[0, 0] + D[1, 1]),
                D[0, 2] - 1j * D[1, 2],
                0.5 * (D[0, 0] - D[1, 1]) - 1j * D[0, 1],
            ]
        )
    if D.ndim == 4:
        return np.array(
            [
                _S35_8 * (D[0, 0, 0, 0] + D[1, 1, 1, 1] + 2.0 * D[0, 0, 1, 1]),
                _S7_2 * (-D[1, 1, 0, 2] - D[0, 0, 0, 2] + 1j * (D[1, 1, 1, 2] + D[0, 0, 1, 2])),
                0.5 * _S7 * (D[1, 1, 1, 1] - D[0, 0, 0, 0] + 2j * (D[1, 1, 0, 1] + D[0, 0, 0, 1])),
                (D[0, 0, 0, 2] - 3.0 * D[1, 1, 0, 2] - 1j * (3.0 * D[0, 0, 1, 2] - D[1, 1, 1, 2])) / _S2,
                0.25 * D[0, 0, 0, 0]
                + 0.25 * D[1, 1, 1, 1]
                - 1.5 * D[0, 0, 1, 1]
                + 1j * (D[1, 1, 0, 1] - D[0, 0, 0, 1]),
            ]
        )
    raise UnsupportedOrder(f"multipole coefficients are available for orders 2 and 4, not {D.ndim}")


@dataclass(frozen=True)
class DeviatorPolynomial:
    """
    Degree-``2q`` polynomial of a deviator.

    ``coeffs[k]`` multiplies ``x**k``.  With ``c_r = sqrt(q! q! / ((q+r)! (q-r)!))``
    the coefficient of ``x^(q+r)`` is ``c_r conj(a_r)`` and that of
    ``x^(q-r)`` is ``(-1)^r c_r a_r``.
    """

    order: int
    a: np.ndarray
    coeffs: np.ndarray

    @property
    def is_zero(self):
        return not np.any(self.coeffs)

    def __call__(self, x):
        return np.polyval(self.coeffs[::-1], x)


def binomial_weight(q, r):
    return math.sqrt(math.factorial(q) ** 2 / (math.factorial(q + r) * math.factorial(q - r)))


def deviator_poly_coeffs(D, tol=TOL_SYM):
    """Polynomial of a deviator of order 2 or 4 (validated)."""
    D = np.asarray(D, dtype=float)
    if D.ndim not in (2, 4):
        raise UnsupportedOrder(f"deviator polynomial needs order 2 or 4, got {D.ndim}")
    D = check_deviator(D, tol)
    q = D.ndim
    a = multipole_coefficients(D)
    p = np.zeros(2 * q + 1, dtype=complex)
    p[q] = a[0]
    for r in range(1, q + 1):
        c = binomial_weight(q, r)
        p[q + r] = c * np.conj(a[r])
        p[q - r] = (-1) ** r * c * a[r]
    return DeviatorPolynomial(order=q, a=a, coeffs=p)


def solve_roots(P, seed=0, tol_zero=TOL_ZERO_COEF):
    """
    The ``2q`` roots of a deviator polynomial, infinite roots included.

    Raises
    ------
    ZeroPolynomial
        For the zero deviator, whose multipoles are undefined.
    """
    if P.is_zero:
        raise ZeroPolynomial("zero deviator: multipoles are undefined (amplitude 0)")
    return polynomial_roots(P.coeffs, seed=seed, tol_zero=tol_zero)


def root_to_direction(x):
    """Unit vector of a root; ``0`` maps to ``e3`` and infinity to ``-e3``."""
    if not np.isfinite(x):
        return np.array([0.0, 0.0, -1.0])
    r = abs(x)
    # sin(2 atan r) and cos(2 atan r) without trig
    s = 2.0 * r / (1.0 + r * r)
    c = (1.0 - r * r) / (1.0 + r * r)
    if r == 0.0:
        return np.array([0.0, 0.0, 1.0])
    u = np.conj(x) / r
    return np.array([s * u.real, s * u.imag, c])


def direction_to_root(n):
    n = np.asarray(n, dtype=float)
    n = n / np.linalg.norm(n)
    if n[2] <= -1.0 + 1e-300:
        return complex(np.inf, 0.0)
    return complex(n[0], -n[1]) / (1.0 + n[2])


_REFLECT_Z = np.array([1.0, 1.0, -1.0])


def pair_score(n, m, mode="antipodal"):
    """Distance from the partner relation: ``n = -m`` (antipodal) or the ``1/conj`` reciprocal ``n = diag(1,1,-1) m``."""
    if mode == "antipodal":
        return float(np.linalg.norm(n + m))
    if mode == "reciprocal":
        return float(np.linalg.norm(n - _REFLECT_Z * m))
    raise ValidationError(f"unknown pairing mode {mode!r}")


def closure_residual(roots, mode="antipodal"):
    """Largest distance from any root's direction to the partner of its nearest root."""
    dirs = [root_to_direction(x) for x in roots]
    worst = 0.0
    for i, n in enumerate(dirs):
        best = min(pair_score(n, m, mode) for j, m in enumerate(dirs) if j != i)
        worst = max(worst, best)
    return worst


def _perfect_matchings(items):
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for k, other in enumerate(rest):
        for tail in _perfect_matchings(rest[:k] + rest[k + 1 :]):
            yield [(first, other)] + tail


def best_matching(dirs, mode="antipodal"):
    """Perfect matching of directions minimizing the worst pair score; returns (pairs, score)."""
    best, best_score = None, np.inf
    for matching in _perfect_matchings(list(range(len(dirs)))):
        score = max(pair_score(dirs[i], dirs[j], mode) for i, j in matching)
        if score < best_score:
            best, best_score = matching, score
    return best, best_score


def _cluster(dirs, radius, coeffs=None):
    """
    Replace directions closer than ``radius`` by a common representative.

    The representative starts at the normalized mean.  If ``coeffs`` is
    given, a cluster of size ``m`` is treated as an ``m``-fold root: its
    upper-hemisphere root is refined by Newton steps on the ``(m-1)``-th
    derivative, where it is a simple root.
    """
    if radius <= 0.0:
        return [d.copy() for d in dirs]
    n = len(dirs)
    label = list(range(n))
    for i in range(n):
        for j in range(i + 1, n):
            if np.linalg.norm(dirs[i] - dirs[j]) < radius:
                old, new = label[j], label[i]
                label = [new if l == old else l for l in label]
    out = []
    for i in range(n):
        members = [dirs[j] for j in range(n) if label[j] == label[i]]
        m = np.mean(members, axis=0)
        m = m / np.linalg.norm(m)
        if coeffs is not None and len(members) > 1:
            m = _refine_multiple(coeffs, m, len(members))
        out.append(m)
    return out


def _refine_multiple(coeffs, n, mult):
    sign = 1.0 if n[2] >= 0 else -1.0
    x = direction_to_root(sign * n)
    dp = np.asarray(coeffs, dtype=complex)
    for _ in range(mult - 1):
        dp = dp[1:] * np.arange(1, len(dp))
    x = newton_polish(dp, x, steps=20)
    return sign * root_to_direction(x)


def _canonical(D, directions):
    """Sort directions, fix signs, and let the last direction carry the sign of ``a``."""
    fixed = []
    for n in directions:
        k = int(np.argmax(np.abs(n)))
        fixed.append(-n if n[k] < 0 else n)
    fixed.sort(key=lambda v: tuple(np.round(-v, 12)))
    N = np.array(fixed)
    M = traceless_symmetric_part(multi_outer(N))
    mm = float(np.sum(M * M))
    a = float(np.sum(D * M)) / mm if mm > 0 else 0.0
    if a < 0:
        N[-1] = -N[-1]
        a = -a
    return a, N + 0.0  # drop negative zeros


def roots_to_multipoles(
    roots, D, tol_rec=TOL_REC, tol_root=TOL_ROOT, modes=("antipodal", "reciprocal"), poly=None
):
    """
    Multipole form of ``D`` from the roots of its polynomial.

    Roots are paired, one direction is kept per pair, and the amplitude is
    the least-squares factor ``<D, M> / <M, M>`` with ``M = ⌊n1 ⊗ ... ⊗ nq⌋``.
    Nearly coincident roots (multiple roots are only accurate to a
    fractional power of machine precision) are tried merged at a few radii
    and the variant with the smallest reconstruction error wins.

    Raises
    ------
    PairingFailure
        If no variant admits a perfect matching within ``tol_root``.
    ReconstructionFailure
        If the best reconstruction misses ``D`` by more than
        ``tol_rec * max(||D||, a)``.
    """
    D = np.asarray(D, dtype=float)
    q = D.ndim
    if len(roots) != 2 * q:
        raise ValidationError(f"expected {2 * q} roots, got {len(roots)}")
    raw = [root_to_direction(x) for x in roots]
    dnorm = norm(D)
    if poly is None:
        poly = deviator_poly_coeffs(D, tol=1e-6)
    best = None
    paired_any = False
    for radius in CLUSTER_RADII:
        dirs = _cluster(raw, radius, poly.coeffs)
        for mode in modes:
            matching, score = best_matching(dirs, mode)
            if score > max(tol_root, 2.0 * radius):
                continue
            paired_any = True
            chosen = []
            for i, j in matching:
                # keep the member of the pair in the upper hemisphere (smaller |x|)
                chosen.append(dirs[i] if dirs[i][2] >= dirs[j][2] else dirs[j])
            a, N = _canonical(D, chosen)
            M = a * traceless_symmetric_part(multi_outer(N))
            res = norm(M - D)
            if best is None or res < best[0]:
                best = (res, a, N)
            if res <= 1e-12 * dnorm:
                break
        if best is not None and best[0] <= 1e-12 * dnorm:
            break
    if not paired_any:
        raise PairingFailure(f"roots do not pair up within {tol_root:g}: {np.round(roots, 8)}")
    res, a, N = best
    if res > tol_rec * max(dnorm, a):
        raise ReconstructionFailure(
            f"multipole reconstruction residual {res:.3e} exceeds {tol_rec * max(dnorm, a):.3e}"
        )
    return MultipoleForm(order=q, amplitude=a, directions=N)


def multipoles(D, seed=0, tol=TOL_SYM, tol_zero=0.0, scale=None, tol_rec=TOL_REC, tol_root=TOL_ROOT):
    """
    Maxwell multipoles of a deviator of order 2 or 4.

    Parameters
    ----------
    D : array_like
        Deviator of order 2 or 4.
    seed : int
        Seed for root-finder restarts.
    tol : float
        Relative tolerance of the deviator check.
    tol_zero : float
        ``D`` counts as zero when ``||D|| <= tol_zero * scale``; the result
        then has amplitude 0 and no directions.
    scale : float, optional
        Reference magnitude for ``tol_zero`` (default ``||D||``, so only an
        exactly zero ``D`` is treated as zero).
    tol_rec, tol_root : float
        Reconstruction and root-pairing tolerances.

    Returns
    -------
    MultipoleForm
    """
    D = np.asarray(D, dtype=float)
    if D.ndim not in (2, 4):
        raise UnsupportedOrder(f"multipoles are available for orders 2 and 4, not {D.ndim}")
    dnorm = norm(D)
    ref = dnorm if scale is None else scale
    if dnorm == 0.0 or dnorm <= tol_zero * ref:
        return MultipoleForm(order=D.ndim, amplitude=0.0, directions=None)
    P = deviator_poly_coeffs(D, tol)
    roots = solve_roots(P, seed=seed)
    return roots_to_multipoles(roots, D, tol_rec=tol_rec, tol_root=tol_root, poly=P)


def max_root_residual(P, roots):
    """Largest backward error of the finite roots."""
    return max((backward_error(P.coeffs, x) for x in roots if np.isfinite(x)), default=0.0)


def same_direction_sets(A, B, tol=1e-6):
    """True if two direction lists agree as unordered sets up to the sign of each member."""
    A = [np.asarray(a) for a in A]
    B = [np.asarray(b) for b in B]
    if len(A) != len(B):
        return False
    for perm in itertools.permutations(range(len(B))):
        if all(min(np.linalg.norm(a - B[k]), np.linalg.norm(a + B[k])) <= tol for a, k in zip(A, perm)):
            return True
    return False
