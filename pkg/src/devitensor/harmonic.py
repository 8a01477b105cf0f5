"""
Totally symmetric tensors as homogeneous polynomials, and their harmonic
decomposition into deviators.

A totally symmetric tensor ``S`` of order ``q`` generates the polynomial
``S(r) = S_{i1..iq} r_i1 ... r_iq``.  Removing traces from ``S`` is the same
as projecting ``S(r)`` onto harmonic polynomials, so

    S = H_q + s(I H_{q-2}) + s(I I H_{q-4}) + ...

with deviators ``H_k`` of order ``k``.
"""

import itertools
import math
from dataclasses import dataclass

import numpy as np

from .errors import NotTotallySymmetric, ValidationError
from .tensor import (
    I,
    TOL_SYM,
    as_tensor,
    isotropic_power,
    norm,
    symmetrize,
    symmetry_residual,
    traceless_symmetric_part,
)


def monomial_exponents(degree):
    """Exponent triples ``(a, b, c)`` with ``a + b + c = degree`` in lexicographically descending order."""
    return [
        (a, b, degree - a - b)
        for a in range(degree, -1, -1)
        for b in range(degree - a, -1, -1)
    ]


def _exponent_of(index):
    e = [0, 0, 0]
    for i in index:
        e[i] += 1
    return tuple(e)


def _multinomial(exps):
    return math.factorial(sum(exps)) // math.prod(math.factorial(e) for e in exps)


@dataclass(frozen=True)
class HomogeneousPolynomial:
    """
    Homogeneous polynomial in ``r1, r2, r3``.

    ``coeffs[m]`` multiplies the monomial ``r1^a r2^b r3^c`` with
    ``(a, b, c) = monomial_exponents(degree)[m]``.  Multinomial
    multiplicities are already absorbed, so evaluation is a plain sum.
    """

    degree: int
    coeffs: np.ndarray

    def __post_init__(self):
        n = (self.degree + 1) * (self.degree + 2) // 2
        if self.degree < 0 or len(self.coeffs) != n:
            raise ValidationError(f"degree {self.degree} needs {n} coefficients")

    @property
    def exponents(self):
        return monomial_exponents(self.degree)

    def __call__(self, r):
        r = np.asarray(r, dtype=float)
        return float(sum(c * r[0] ** a * r[1] ** b * r[2] ** e for c, (a, b, e) in zip(self.coeffs, self.exponents)))

    def laplacian(self):
        """Laplacian, a polynomial of degree ``degree - 2`` (the zero polynomial of degree 0 below that)."""
        if self.degree < 2:
            return HomogeneousPolynomial(0, np.zeros(1))
        target = {e: k for k, e in enumerate(monomial_exponents(self.degree - 2))}
        out = np.zeros(len(target))
        for c, exps in zip(self.coeffs, self.exponents):
            for axis in range(3):
                p = exps[axis]
                if p >= 2:
                    lowered = list(exps)
                    lowered[axis] -= 2
                    out[target[tuple(lowered)]] += c * p * (p - 1)
        return HomogeneousPolynomial(self.degree - 2, out)


def generate_polynomial(T):
    """Polynomial ``T(r)`` generated by a tensor; only the totally symmetric part contributes."""
    T = as_tensor(T)
    q = T.ndim
    position = {e: k for k, e in enumerate(monomial_exponents(q))}
    coeffs = np.zeros(len(position))
    for index in itertools.product(range(3), repeat=q):
        coeffs[position[_exponent_of(index)]] += T[index]
    return HomogeneousPolynomial(q, coeffs)


def symmetric_from_polynomial(P):
    """Totally symmetric tensor whose generated polynomial is ``P``."""
    q = P.degree
    if q > 4:
        raise ValidationError("polynomial degree must be at most 4")
    S = np.zeros((3,) * q)
    lookup = dict(zip(P.exponents, P.coeffs))
    for index in itertools.product(range(3), repeat=q):
        e = _exponent_of(index)
        S[index] = lookup[e] / _multinomial(e)
    return S


def _extract_isotropic_factor(R):
    """
    Recover ``X`` from ``R = s(I X)`` where ``X`` is totally symmetric.

    Taking traces of the ansatz gives, for ``X`` of order 0, 1, 2:
    ``tr R = 3 X``, ``tr R = 5/3 X`` and ``tr R = (7 X + tr(X) I) / 6``.
    """
    q = R.ndim
    t = np.trace(R, axis1=0, axis2=1)
    if q == 2:
        return t / 3.0
    if q == 3:
        return 0.6 * t
    trX = 0.6 * np.trace(t)
    return (6.0 * t - trX * I) / 7.0


@dataclass(frozen=True)
class HarmonicDecomposition:
    """Deviators of orders ``q, q-2, ...`` of a totally symmetric tensor."""

    deviators: tuple

    @property
    def order(self):
        return self.deviators[0].ndim

    def term(self, k):
        """The contribution ``s(I^k H_{q-2k})`` of the k-th deviator."""
        H = self.deviators[k]
        if k == 0:
            return H.copy()
        return symmetrize(np.multiply.outer(isotropic_power(k), H))

    def reconstruct(self):
        return sum(self.term(k) for k in range(len(self.deviators)))


def harmonic_decompose(S, tol=TOL_SYM):
    """
    Harmonic decomposition of a totally symmetric tensor of order at most 4.

    Parameters
    ----------
    S : array_like
        Totally symmetric tensor.
    tol : float
        Relative tolerance of the total-symmetry check.

    Returns
    -------
    HarmonicDecomposition
        ``deviators[k]`` has order ``q - 2k``.
    """
    S = as_tensor(S)
    res = symmetry_residual(S)
    if res > tol * max(norm(S), np.finfo(float).tiny):
        raise NotTotallySymmetric(f"tensor is not totally symmetric (residual {res:.3e})")
    S = symmetrize(S)
    deviators = []
    current = S
    while True:
        H = traceless_symmetric_part(current)
        deviators.append(H)
        if current.ndim < 2:
            break
        current = _extract_isotropic_factor(current - H)
    return HarmonicDecomposition(tuple(deviators))
