"""
Roots of complex polynomials by Laguerre's method.

Roots are found one at a time on successively deflated polynomials and then
polished with Newton steps on the original polynomial.  Coefficients are
given in ascending order: ``p[k]`` multiplies ``x**k``.
"""

import numpy as np

from .errors import NoConvergence, ZeroPolynomial

EPS = np.finfo(float).eps
MR = 8
MT = 10
MAXIT = MT * MR
# fractional steps used every MT iterations to break limit cycles
FRAC = (0.0, 0.5, 0.25, 0.75, 0.13, 0.38, 0.62, 0.88, 1.0)

TOL_ZERO_COEF = 1e-12


def horner(p, x):
    """Value of the ascending-coefficient polynomial ``p`` at ``x``."""
    out = 0j
    for c in p[::-1]:
        out = out * x + c
    return out


def backward_error(p, x):
    """``|P(x)| / sum_k |p_k| |x|^k``, the relative residual of a root estimate."""
    if not np.isfinite(x):
        return 0.0
    ax = abs(x)
    denom = sum(abs(c) * ax**k for k, c in enumerate(p))
    if denom == 0.0:
        return 0.0
    return abs(horner(p, x)) / denom


def laguerre(p, x):
    """
    Refine one root of ``p`` starting from ``x``.

    Raises
    ------
    NoConvergence
        If no root is reached within ``MAXIT`` iterations.
    """
    m = len(p) - 1
    for it in range(1, MAXIT + 1):
        b = p[m]
        err = abs(b)
        d = f = 0j
        abx = abs(x)
        for j in range(m - 1, -1, -1):
            f = x * f + d
            d = x * d + b
            b = x * b + p[j]
            err = abs(b) + abx * err
        err *= EPS
        if abs(b) <= err:
            return x
        g = d / b
        g2 = g * g
        h = g2 - 2.0 * f / b
        sq = np.sqrt((m - 1) * (m * h - g2))
        gp = g + sq
        gm = g - sq
        abp = abs(gp)
        abm = abs(gm)
        if abp < abm:
            gp = gm
        if max(abp, abm) > 0.0:
            dx = m / gp
        else:
            dx = (1.0 + abx) * complex(np.cos(it), np.sin(it))
        x1 = x - dx
        if x1 == x:
            return x
        if it % MT:
            x = x1
        else:
            x = x - FRAC[it // MT] * dx
    raise NoConvergence(f"Laguerre iteration did not converge (last estimate {x})")


def _deflate(p, x):
    """Divide ``p`` by ``(t - x)``; returns the quotient in ascending order."""
    m = len(p) - 1
    q = np.zeros(m, dtype=complex)
    b = p[m]
    for j in range(m - 1, -1, -1):
        q[j] = b
        b = x * b + p[j]
    return q


def newton_polish(p, x, steps=8):
    dp = np.array([k * c for k, c in enumerate(p)][1:], dtype=complex)
    best = abs(horner(p, x))
    for _ in range(steps):
        if best == 0.0:
            break
        slope = horner(dp, x)
        if slope == 0:
            break
        cand = x - horner(p, x) / slope
        val = abs(horner(p, cand))
        if val >= best:
            break
        x, best = cand, val
    return x


def polynomial_roots(p, seed=0, tol_zero=TOL_ZERO_COEF, restarts=20):
    """
    All roots of a complex polynomial, including roots at infinity.

    Parameters
    ----------
    p : array_like of complex
        Ascending coefficients of a polynomial of nominal degree ``n = len(p) - 1``.
    seed : int
        Seed for the random restart points used when Laguerre fails from 0.
    tol_zero : float
        Coefficients with ``|p_k| < tol_zero * max|p|`` at either end are
        treated as zero.  Each dropped leading coefficient is one root at
        infinity, each dropped trailing coefficient one root at 0.
    restarts : int
        Number of random restarts per root before giving up.

    Returns
    -------
    numpy.ndarray of complex, length ``n``
        Roots; infinite roots are ``complex(inf, 0)``.
    """
    p = np.asarray(p, dtype=complex)
    n = len(p) - 1
    scale = float(np.max(np.abs(p))) if len(p) else 0.0
    if scale == 0.0:
        raise ZeroPolynomial("all polynomial coefficients vanish")
    small = np.abs(p) < tol_zero * scale
    hi = n
    while small[hi]:
        hi -= 1
    lo = 0
    while small[lo]:
        lo += 1
    core = p[lo : hi + 1] / scale
    rng = np.random.default_rng(seed)
    roots = []
    work = core.copy()
    for _ in range(hi - lo):
        start = 0j
        for attempt in range(restarts + 1):
            try:
                x = laguerre(work, start)
                break
            except NoConvergence:
                if attempt == restarts:
                    raise
                start = complex(*rng.normal(size=2))
        roots.append(x)
        work = _deflate(work, x)
    roots = [newton_polish(core, x) for x in roots]
    out = [0j] * lo + roots + [complex(np.inf, 0.0)] * (n - hi)
    return np.array(out, dtype=complex)
