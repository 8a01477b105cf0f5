"""
Mirror planes of deviators and the anisotropy class of a stiffness tensor.

For tensors of even order a reflection ``I - 2 m m`` and the half-turn
about ``m`` act identically, so a plane normal ``m`` is a symmetry exactly
when the multipole set ``{±n_i}`` is mapped onto itself.  That leaves few
possibilities: ``m`` is parallel to some ``n_i``, to ``n_i ± n_j`` or to
``n_i × n_j``, unless all multipoles are collinear, in which case the
deviator is transversely isotropic.  Candidates are therefore generated
from the multipoles and accepted only after a direct reflection test.

The planes of a stiffness tensor are the normals shared by its three
deviators ``D``, ``Dhat`` and ``D4`` (the scalar parts are isotropic).
"""

import enum
import itertools
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import least_squares

from .errors import ConfigurationAmbiguous, ValidationError
from .multipole import multipoles
from .stiffness import decompose_stiffness
from .tensor import as_tensor, norm

TOL_MIRROR = 1e-8
TOL_DIR = 1e-6
TOL_ZERO = 1e-10
TOL_COINCIDE = 1e-6
# candidates this close to a mirror are polished before the strict test
LOOSE_MIRROR = 1e-3


class SymmetryClass(enum.Enum):
    ISOTROPIC = "isotropic"
    TRANSVERSELY_ISOTROPIC = "transversely_isotropic"
    CUBIC = "cubic"
    TETRAGONAL = "tetragonal"
    TRIGONAL = "trigonal"
    ORTHOTROPIC = "orthotropic"
    MONOCLINIC = "monoclinic"
    TRICLINIC = "triclinic"


class PlaneVariant(enum.Enum):
    ALL = "all_directions"
    TRANSVERSE = "transverse_family"
    FINITE = "finite"


def _unit(v):
    v = np.asarray(v, dtype=float)
    return v / np.linalg.norm(v)


def canonical_normal(n):
    """Unit normal with its largest-magnitude component positive."""
    n = _unit(n)
    k = int(np.argmax(np.abs(n)))
    return (-n if n[k] < 0 else n) + 0.0


def parallel(a, b, tol=TOL_DIR):
    return float(np.linalg.norm(np.cross(a, b))) <= tol


def orthogonal(a, b, tol=TOL_DIR):
    return abs(float(a @ b)) <= tol


def _dedupe(normals, tol=TOL_DIR):
    out = []
    for n in normals:
        if not any(parallel(n, m, tol) for m in out):
            out.append(n)
    return out


@dataclass(frozen=True)
class SymmetryPlaneSet:
    """
    Mirror-plane normals, each up to sign.

    ``ALL``: every plane.  ``TRANSVERSE``: the plane normal to ``axis`` and
    every plane containing ``axis``.  ``FINITE``: the listed ``normals``.
    """

    variant: PlaneVariant
    axis: np.ndarray = None
    normals: tuple = field(default_factory=tuple)

    @classmethod
    def all_directions(cls):
        return cls(PlaneVariant.ALL)

    @classmethod
    def transverse(cls, axis):
        return cls(PlaneVariant.TRANSVERSE, axis=canonical_normal(axis))

    @classmethod
    def finite(cls, normals, tol=TOL_DIR):
        ns = _dedupe([canonical_normal(n) for n in normals], tol)
        ns.sort(key=lambda v: tuple(np.round(-v, 9)))
        return cls(PlaneVariant.FINITE, normals=tuple(ns))

    def __len__(self):
        if self.variant is PlaneVariant.FINITE:
            return len(self.normals)
        raise TypeError("infinite plane set has no length")

    def contains(self, n, tol=TOL_DIR):
        n = _unit(n)
        if self.variant is PlaneVariant.ALL:
            return True
        if self.variant is PlaneVariant.TRANSVERSE:
            return parallel(n, self.axis, tol) or orthogonal(n, self.axis, tol)
        return any(parallel(n, m, tol) for m in self.normals)

    def rotated(self, Q):
        Q = np.asarray(Q, dtype=float)
        if self.variant is PlaneVariant.ALL:
            return self
        if self.variant is PlaneVariant.TRANSVERSE:
            return SymmetryPlaneSet.transverse(Q @ self.axis)
        return SymmetryPlaneSet.finite([Q @ n for n in self.normals])

    def equals(self, other, tol=TOL_DIR):
        if self.variant is not other.variant:
            return False
        if self.variant is PlaneVariant.ALL:
            return True
        if self.variant is PlaneVariant.TRANSVERSE:
            return parallel(self.axis, other.axis, tol)
        return len(self.normals) == len(other.normals) and all(other.contains(n, tol) for n in self.normals)

    def to_dict(self):
        out = {"variant": self.variant.value}
        if self.variant is PlaneVariant.TRANSVERSE:
            out["axis"] = self.axis.tolist()
        if self.variant is PlaneVariant.FINITE:
            out["normals"] = [n.tolist() for n in self.normals]
        return out


def reflect(T, m):
    """Apply ``Q = I - 2 m m`` to every index of ``T``."""
    m = _unit(m)
    Q = np.eye(3) - 2.0 * np.outer(m, m)
    out = T
    for axis in range(T.ndim):
        out = np.moveaxis(np.tensordot(Q, out, axes=([1], [axis])), 0, axis)
    return out


def mirror_residual(T, m):
    """``||reflect(T, m) - T|| / ||T||`` (0 for the zero tensor)."""
    T = np.asarray(T, dtype=float)
    t = norm(T)
    if t == 0.0:
        return 0.0
    return norm(reflect(T, m) - T) / t


def refine_normal(T, m):
    """Locally minimize the mirror residual of ``T`` starting from ``m``."""
    T = np.asarray(T, dtype=float)
    scale = norm(T)

    def f(v):
        return ((reflect(T, v) - T) / scale).ravel()

    sol = least_squares(f, _unit(m), method="lm", xtol=1e-15, ftol=1e-15, gtol=1e-15)
    return _unit(sol.x)


def verified_mirror(T, m, tol=TOL_MIRROR):
    """Return the (possibly polished) normal if it is a mirror of ``T``, else ``None``."""
    m = _unit(m)
    r = mirror_residual(T, m)
    if r <= tol:
        return m
    if r <= LOOSE_MIRROR:
        m2 = refine_normal(T, m)
        if mirror_residual(T, m2) <= tol:
            return m2
    return None


def _candidates(directions):
    cands = []
    for n in directions:
        cands.append(n)
    for a, b in itertools.combinations(directions, 2):
        for v in (a + b, a - b, np.cross(a, b)):
            if np.linalg.norm(v) > 1e-8:
                cands.append(_unit(v))
    return _dedupe(cands, 1e-9)


def _collinear(directions, tol=TOL_COINCIDE):
    n0 = directions[0]
    return all(1.0 - abs(float(n0 @ n)) <= tol for n in directions[1:])


def _mean_axis(directions):
    n0 = directions[0]
    return _unit(sum(n if n @ n0 >= 0 else -n for n in directions))


def _perpendicular_basis(axis):
    k = int(np.argmin(np.abs(axis)))
    e = np.zeros(3)
    e[k] = 1.0
    u = _unit(np.cross(axis, e))
    return u, np.cross(axis, u)


def _transverse_if_verified(T, axis, tol):
    axis = verified_mirror(T, axis, tol)
    if axis is None:
        return None
    u, v = _perpendicular_basis(axis)
    probes = (u, v, _unit(u + v), _unit(u + 2.0 * v))
    if all(mirror_residual(T, p) <= tol for p in probes):
        return SymmetryPlaneSet.transverse(axis)
    return None


def planes_from_multipoles(mp, T=None, tol_mirror=TOL_MIRROR, tol_dir=TOL_DIR, tol_coincide=TOL_COINCIDE):
    """
    Mirror planes of a deviator from its multipole form.

    Parameters
    ----------
    mp : MultipoleForm
        Multipoles of the deviator (amplitude 0 gives every plane).
    T : array_like, optional
        The deviator itself, used for the reflection test; defaults to
        ``mp.tensor()``.

    Returns
    -------
    SymmetryPlaneSet
    """
    if mp.is_zero:
        return SymmetryPlaneSet.all_directions()
    T = mp.tensor() if T is None else np.asarray(T, dtype=float)
    dirs = [_unit(n) for n in mp.directions]
    if _collinear(dirs, tol_coincide):
        found = _transverse_if_verified(T, _mean_axis(dirs), tol_mirror)
        if found is not None:
            return found
    normals = []
    for c in _candidates(dirs):
        m = verified_mirror(T, c, tol_mirror)
        if m is not None:
            normals.append(m)
    return SymmetryPlaneSet.finite(normals, tol_dir)


def planes_of_deviator2(mp, T=None, tol_mirror=TOL_MIRROR, tol_dir=TOL_DIR, tol_coincide=TOL_COINCIDE):
    """
    Mirror planes of a second-order deviator.

    ``a = 0``: all planes.  ``n1 = ±n2``: the transverse family about
    ``n1``.  Otherwise the eigenframe ``N1 = (n1 + n2)/|n1 + n2|``,
    ``N2 = n1 × n2 / |n1 × n2|`` and ``N3 = N1 × N2``.
    """
    if mp.order != 2:
        raise ValidationError("expected a second-order multipole form")
    if mp.is_zero:
        return SymmetryPlaneSet.all_directions()
    T = mp.tensor() if T is None else np.asarray(T, dtype=float)
    n1, n2 = (_unit(n) for n in mp.directions)
    if 1.0 - abs(float(n1 @ n2)) <= tol_coincide:
        found = _transverse_if_verified(T, _mean_axis([n1, n2]), tol_mirror)
        if found is not None:
            return found
    s = n1 + n2 if np.linalg.norm(n1 + n2) >= np.linalg.norm(n1 - n2) else n1 - n2
    N1 = _unit(s)
    N2 = _unit(np.cross(n1, n2))
    N3 = np.cross(N1, N2)
    normals = [m for m in (verified_mirror(T, N, tol_mirror) for N in (N1, N2, N3)) if m is not None]
    return SymmetryPlaneSet.finite(normals, tol_dir)


def planes_of_deviator4(mp, T=None, tol_mirror=TOL_MIRROR, tol_dir=TOL_DIR, tol_coincide=TOL_COINCIDE):
    """Mirror planes of a fourth-order deviator from its four multipoles."""
    if mp.order != 4:
        raise ValidationError("expected a fourth-order multipole form")
    return planes_from_multipoles(mp, T, tol_mirror, tol_dir, tol_coincide)


def intersect(A, B, tol=TOL_DIR):
    """Normals common to two plane sets."""
    if A.variant is PlaneVariant.ALL:
        return B
    if B.variant is PlaneVariant.ALL:
        return A
    if A.variant is PlaneVariant.TRANSVERSE and B.variant is PlaneVariant.TRANSVERSE:
        a, b = A.axis, B.axis
        if parallel(a, b, tol):
            return A
        normals = [np.cross(a, b)]
        if orthogonal(a, b, tol):
            normals += [a, b]
        return SymmetryPlaneSet.finite(normals, tol)
    if A.variant is PlaneVariant.FINITE and B.variant is PlaneVariant.FINITE:
        return SymmetryPlaneSet.finite([n for n in A.normals if B.contains(n, tol)], tol)
    fam, fin = (A, B) if A.variant is PlaneVariant.TRANSVERSE else (B, A)
    return SymmetryPlaneSet.finite([n for n in fin.normals if fam.contains(n, tol)], tol)


def _is_orthonormal_triple(ns, tol):
    return all(orthogonal(a, b, tol) for a, b in itertools.combinations(ns, 2))


def _angle_between_lines(a, b):
    return float(np.degrees(np.arccos(min(1.0, abs(float(a @ b))))))


def classify_planes(planes, tol=TOL_DIR):
    """
    Anisotropy class of a plane set.

    Raises
    ------
    ConfigurationAmbiguous
        If a finite set matches none of the known patterns.
    """
    if planes.variant is PlaneVariant.ALL:
        return SymmetryClass.ISOTROPIC
    if planes.variant is PlaneVariant.TRANSVERSE:
        return SymmetryClass.TRANSVERSELY_ISOTROPIC
    ns = list(planes.normals)
    k = len(ns)
    ang_tol = np.degrees(tol) * 10.0
    if k == 0:
        return SymmetryClass.TRICLINIC
    if k == 1:
        return SymmetryClass.MONOCLINIC
    if k == 3:
        if _is_orthonormal_triple(ns, tol):
            return SymmetryClass.ORTHOTROPIC
        axis = _unit(np.cross(ns[0], ns[1]))
        coplanar = all(orthogonal(n, axis, tol) for n in ns)
        angles = [_angle_between_lines(a, b) for a, b in itertools.combinations(ns, 2)]
        if coplanar and all(abs(t - 60.0) <= ang_tol for t in angles):
            return SymmetryClass.TRIGONAL
    if k == 5:
        for i, axis in enumerate(ns):
            others = ns[:i] + ns[i + 1 :]
            if all(orthogonal(n, axis, tol) for n in others):
                angles = sorted(_angle_between_lines(a, b) for a, b in itertools.combinations(others, 2))
                # four lines in a plane at 45° spacing: four pairs at 45°, two at 90°
                expected = [45.0] * 4 + [90.0] * 2
                if all(abs(a - e) <= ang_tol for a, e in zip(angles, expected)):
                    return SymmetryClass.TETRAGONAL
    if k == 9:
        axes = [n for n in ns if sum(orthogonal(n, m, tol) for m in ns) == 4]
        if len(axes) == 3 and _is_orthonormal_triple(axes, tol):
            rest = [n for n in ns if not any(parallel(n, a, tol) for a in axes)]
            if len(rest) == 6 and all(
                sum(abs(abs(float(n @ a)) - np.sqrt(0.5)) <= tol for a in axes) == 2 for n in rest
            ):
                return SymmetryClass.CUBIC
    raise ConfigurationAmbiguous(
        f"{k} mirror planes do not match a known symmetry pattern: {[n.round(6).tolist() for n in ns]}"
    )


@dataclass(frozen=True)
class SymmetryAnalysis:
    label: SymmetryClass
    planes: SymmetryPlaneSet
    deviator_planes: dict
    multipoles: dict

    def to_dict(self):
        return {
            "class": self.label.value,
            "planes": self.planes.to_dict(),
            "deviator_planes": {k: v.to_dict() for k, v in self.deviator_planes.items()},
            "multipoles": {k: v.to_dict() for k, v in self.multipoles.items()},
        }


def analyze_stiffness(
    C,
    seed=0,
    tol_mirror=TOL_MIRROR,
    tol_dir=TOL_DIR,
    tol_zero=TOL_ZERO,
    tol_coincide=TOL_COINCIDE,
    decomposition=None,
):
    """
    Multipoles and plane sets of the three deviators of ``C`` and their intersection.

    Every reported plane is checked against ``C`` itself.
    """
    C = as_tensor(C)
    dec = decompose_stiffness(C) if decomposition is None else decomposition
    scale = max(norm(C), np.finfo(float).tiny)
    mps = {}
    sets = {}
    for name, T in (("D", dec.D), ("Dhat", dec.Dhat), ("D4", dec.D4)):
        mp = multipoles(T, seed=seed, tol_zero=tol_zero, scale=scale)
        mps[name] = mp
        T_ref = None if mp.is_zero else T
        if T.ndim == 2:
            sets[name] = planes_of_deviator2(mp, T_ref, tol_mirror, tol_dir, tol_coincide)
        else:
            sets[name] = planes_of_deviator4(mp, T_ref, tol_mirror, tol_dir, tol_coincide)
    planes = sets["D"]
    for name in ("Dhat", "D4"):
        planes = intersect(planes, sets[name], tol_dir)
    _check_on_stiffness(C, planes, tol_mirror)
    label = classify_planes(planes, tol_dir)
    return SymmetryAnalysis(label=label, planes=planes, deviator_planes=sets, multipoles=mps)


def _check_on_stiffness(C, planes, tol):
    if planes.variant is PlaneVariant.FINITE:
        probes = list(planes.normals)
    elif planes.variant is PlaneVariant.TRANSVERSE:
        u, v = _perpendicular_basis(planes.axis)
        probes = [planes.axis, u, v, _unit(u + v)]
    else:
        rng = np.random.default_rng(0)
        probes = [_unit(rng.normal(size=3)) for _ in range(4)]
    # deviator tolerances are relative to each deviator, so allow for the ratio of norms
    worst = max((mirror_residual(C, m) for m in probes), default=0.0)
    if worst > 100.0 * tol:
        raise ConfigurationAmbiguous(f"a deviator mirror plane fails on the stiffness (residual {worst:.3e})")


def classify_stiffness(C, seed=0, **tols):
    """Anisotropy class and mirror-plane set of a stiffness tensor."""
    res = analyze_stiffness(C, seed=seed, **tols)
    return res.label, res.planes
