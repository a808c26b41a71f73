"""Linear algebra in Minkowski space R^{2,1}.

Vectors are plain numpy arrays of shape ``(3,)`` (or stacks ``(..., 3)``), and
linear isometries are ``(3, 3)`` arrays.  The inner product has signature
``(+, +, -)``::

    <v, w> = v1 w1 + v2 w2 - v3 w3

so the hyperbolic plane is the upper sheet of ``<v, v> = -1`` and the null
cone ``<v, v> = 0`` projects onto the circle at infinity.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .errors import InvalidLorentzTransform, NotHyperbolic

Q = np.diag([1.0, 1.0, -1.0])

ISOMETRY_TOL = 1e-10
TRACE_TOL = 1e-9
NULL_TOL = 1e-12


class CausalType(enum.Enum):
    TIMELIKE = "timelike"
    SPACELIKE = "spacelike"
    NULL = "null"
    ZERO = "zero"


class TransformType(enum.Enum):
    HYPERBOLIC = "hyperbolic"
    PARABOLIC = "parabolic"
    ELLIPTIC = "elliptic"
    IDENTITY = "identity"


@dataclass(frozen=True, eq=False)
class EigenFrame:
    """Eigen-data of a hyperbolic element ``A`` of SO(2,1).

    ``x0`` is the unit spacelike fixed vector, ``x_minus``/``x_plus`` are the
    contracting/expanding null eigenvectors (third coordinate 1) and ``ell``
    is the translation length, ``A x_plus = exp(ell) x_plus``.  The sign of
    ``x0`` is fixed by ``det(x0, x_minus, x_plus) > 0``.
    """

    x0: np.ndarray
    x_minus: np.ndarray
    x_plus: np.ndarray
    ell: float


def inner(v, w):
    v = np.asarray(v, dtype=float)
    w = np.asarray(w, dtype=float)
    return v[..., 0] * w[..., 0] + v[..., 1] * w[..., 1] - v[..., 2] * w[..., 2]


def norm2(v):
    return inner(v, v)


def causal_type(v) -> CausalType:
    v = np.asarray(v, dtype=float)
    if not np.any(v):
        return CausalType.ZERO
    q = float(norm2(v))
    if abs(q) <= NULL_TOL:
        return CausalType.NULL
    return CausalType.TIMELIKE if q < 0 else CausalType.SPACELIKE


def lorentz_cross(u, v):
    """The vector ``w`` with ``<w, z> = det(u, v, z)`` for every ``z``."""
    return np.cross(np.asarray(u, dtype=float), np.asarray(v, dtype=float)) * np.array(
        [1.0, 1.0, -1.0]
    )


def det3(u, v, w) -> float:
    return float(np.linalg.det(np.column_stack([u, v, w])))


def boost_a(t: float) -> np.ndarray:
    """The one-parameter subgroup fixing ``e1`` and translating along the e2-axis."""
    c, s = np.cosh(t), np.sinh(t)
    return np.array([[1.0, 0.0, 0.0], [0.0, c, s], [0.0, s, c]])


def rotation(theta: float) -> np.ndarray:
    """Rotation of H^2 about the origin ``(0, 0, 1)`` by angle ``theta``."""
    c, s = np.cos(theta), np.sin(theta)
    return np.array([[c, -s, 0.0], [s, c, 0.0], [0.0, 0.0, 1.0]])


def lorentz_inverse(a) -> np.ndarray:
    """Inverse of an element of O(2,1), computed as ``Q A^T Q``."""
    a = np.asarray(a, dtype=float)
    return Q @ a.T @ Q


def isometry_defect(a) -> float:
    """Size of ``A^T Q A - Q`` relative to the scale of ``A``.

    Products of long words have entries of size ``exp(length)``, so the
    residual is measured against ``max(1, |A|^2)``; for bounded matrices this
    is the plain absolute defect.
    """
    a = np.asarray(a, dtype=float)
    scale = max(1.0, float(np.max(np.abs(a))) ** 2)
    return float(np.max(np.abs(a.T @ Q @ a - Q))) / scale


def is_lorentz(a, tol: float = ISOMETRY_TOL) -> bool:
    return isometry_defect(a) <= tol


def is_orthochronous_special(a, tol: float = ISOMETRY_TOL) -> bool:
    a = np.asarray(a, dtype=float)
    return is_lorentz(a, tol) and np.linalg.det(a) > 0 and a[2, 2] > 0


def classify_transform(a, tol: float = TRACE_TOL) -> TransformType:
    a = np.asarray(a, dtype=float)
    if not is_lorentz(a):
        raise InvalidLorentzTransform(
            f"matrix is not a Lorentz isometry (defect {isometry_defect(a):.3g})"
        )
    tr = float(np.trace(a))
    if tr > 3.0 + tol:
        return TransformType.HYPERBOLIC
    if tr < 3.0 - tol:
        return TransformType.ELLIPTIC
    if np.allclose(a, np.eye(3), atol=tol, rtol=0.0):
        return TransformType.IDENTITY
    return TransformType.PARABOLIC


def translation_length(a) -> float:
    """``arccosh((tr A - 1) / 2)`` for a hyperbolic element."""
    a = np.asarray(a, dtype=float)
    tr = float(np.trace(a))
    if tr <= 3.0 + TRACE_TOL:
        raise NotHyperbolic(f"trace {tr!r} does not exceed 3")
    return float(np.arccosh((tr - 1.0) / 2.0))


def unit_timelike_in_plane(x0) -> np.ndarray:
    """Future unit timelike vector orthogonal to the unit spacelike ``x0``."""
    x0 = np.asarray(x0, dtype=float)
    u = np.array([0.0, 0.0, 1.0]) + x0[2] * x0
    return u / np.sqrt(-norm2(u))


def null_pair(x0):
    """Future null vectors spanning ``x0^perp``, scaled to third coordinate 1.

    Returned as ``(n_minus, n_plus)`` ordered so that
    ``det(x0, n_minus, n_plus) > 0``.
    """
    x0 = np.asarray(x0, dtype=float)
    u = unit_timelike_in_plane(x0)
    w = lorentz_cross(x0, u)
    w = w / np.sqrt(norm2(w))
    n1 = u + w
    n2 = u - w
    n1 = n1 / n1[2]
    n2 = n2 / n2[2]
    if det3(x0, n1, n2) > 0:
        return n1, n2
    return n2, n1


def eigen_frame(a) -> EigenFrame:
    """Closed-form eigenframe of a hyperbolic element of SO(2,1)^0.

    The fixed vector comes from the kernel of ``A - A^{-1}``: the matrix
    ``Q(A - A^{-1})`` is antisymmetric, and its axial vector spans the fixed
    line.  The null eigenvectors are the two null lines of the orthogonal
    plane; no general eigensolver is involved.
    """
    a = np.asarray(a, dtype=float)
    if classify_transform(a) is not TransformType.HYPERBOLIC:
        raise NotHyperbolic("eigenframes exist only for hyperbolic elements")
    ell = translation_length(a)
    s = Q @ a - a.T @ Q
    x0 = np.array([s[2, 1], s[0, 2], s[1, 0]])
    x0 = x0 / np.sqrt(norm2(x0))
    n1, n2 = null_pair(x0)
    # A n = lambda n; read lambda off the (positive) third coordinate
    lam1 = (a @ n1)[2]
    x_plus, x_minus = (n1, n2) if lam1 > 1.0 else (n2, n1)
    if det3(x0, x_minus, x_plus) < 0:
        x0 = -x0
    return EigenFrame(x0=x0, x_minus=x_minus, x_plus=x_plus, ell=ell)


def random_so21(rng: np.random.Generator, max_boost: float = 2.0) -> np.ndarray:
    """A random element of SO(2,1)^0 as rotation * boost * rotation."""
    t1, t2 = rng.uniform(0.0, 2.0 * np.pi, size=2)
    s = rng.uniform(-max_boost, max_boost)
    return rotation(t1) @ boost_a(s) @ rotation(t2)
