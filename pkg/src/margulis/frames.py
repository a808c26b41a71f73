"""Unit tangent vectors of H^2 as elements of SO(2,1)^0.

A matrix ``g`` in SO(2,1)^0 is read as the unit tangent vector ``g(u0)`` where
``u0`` sits at ``P0 = (0, 0, 1)`` pointing along ``(0, 1, 0)``.  The geodesic
flow is right multiplication by the boost subgroup, ``g -> g a(t)``, with the
sign chosen so the basepoint moves *forward* along its direction.  (Writing
the flow on the quotient as a right action of ``a(-t)`` is the same flow run
backwards; every recurrence statement here is two-sided, so nothing depends on
the choice.)

The neutral direction of a frame is ``g(V0)`` with ``V0 = (-1, 0, 0)``.  That
sign makes ``det(V0, V0_minus, V0_plus) > 0`` for the null eigenvectors
``(0, -1, 1)`` and ``(0, 1, 1)`` of ``a(t)``, which is the orientation used by
:func:`margulis.lorentz.eigen_frame`.  With this choice the neutral direction
along the periodic orbit of ``gamma`` equals the fixed vector ``x0`` of
``gamma``'s eigenframe.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InvalidFrameData
from .lorentz import boost_a, inner, lorentz_cross, norm2

P0 = np.array([0.0, 0.0, 1.0])
U0_DIRECTION = np.array([0.0, 1.0, 0.0])
V0 = np.array([-1.0, 0.0, 0.0])

FRAME_TOL = 1e-9


@dataclass(frozen=True, eq=False)
class Frame:
    g: np.ndarray

    @property
    def basepoint(self) -> np.ndarray:
        return self.g[:, 2].copy()

    @property
    def direction(self) -> np.ndarray:
        return self.g[:, 1].copy()

    def act(self, h) -> "Frame":
        """Left action ``h . g`` of a linear isometry."""
        return Frame(np.asarray(h, dtype=float) @ self.g)


@dataclass(frozen=True)
class BoundaryPoint:
    """A point of the circle at infinity, stored as ``(xi1, xi2, 1)``."""

    xi1: float
    xi2: float

    @classmethod
    def from_vector(cls, v) -> "BoundaryPoint":
        v = np.asarray(v, dtype=float)
        if v[2] <= 0:
            v = -v
        x, y = v[0] / v[2], v[1] / v[2]
        r = np.hypot(x, y)
        return cls(float(x / r), float(y / r))

    @classmethod
    def from_angle(cls, theta: float) -> "BoundaryPoint":
        return cls(float(np.cos(theta)), float(np.sin(theta)))

    @property
    def angle(self) -> float:
        return float(np.arctan2(self.xi2, self.xi1))

    @property
    def vector(self) -> np.ndarray:
        return np.array([self.xi1, self.xi2, 1.0])


def on_future_sheet(p, tol: float = FRAME_TOL) -> bool:
    p = np.asarray(p, dtype=float)
    return abs(norm2(p) + 1.0) <= tol * max(1.0, p[2] ** 2) and p[2] > 0


def lift_to_sheet(p) -> np.ndarray:
    """Project onto the future sheet by recomputing the third coordinate.

    ``sqrt(1 + x1^2 + x2^2)`` has no cancellation, unlike rescaling by
    ``<p, p>``, which loses all precision far from the origin.
    """
    p = np.array(p, dtype=float)
    p[2] = np.sqrt(1.0 + p[0] ** 2 + p[1] ** 2)
    return p


def frame_from(point, direction) -> Frame:
    """The unique frame with basepoint ``point`` and unit tangent ``direction``."""
    p = np.asarray(point, dtype=float)
    d = np.asarray(direction, dtype=float)
    if not on_future_sheet(p):
        raise InvalidFrameData("basepoint is not on the future sheet of <v,v> = -1")
    scale = max(1.0, float(np.max(np.abs(p))) * float(np.max(np.abs(d))))
    if abs(norm2(d) - 1.0) > FRAME_TOL * scale or abs(inner(p, d)) > FRAME_TOL * scale:
        raise InvalidFrameData("direction must be unit spacelike and orthogonal to the basepoint")
    first = lorentz_cross(d, p)
    return Frame(np.column_stack([first, d, p]))


def identity_frame() -> Frame:
    return Frame(np.eye(3))


def flow_frame(g: Frame, t: float) -> Frame:
    return Frame(g.g @ boost_a(t))


def spacelike_direction(g: Frame) -> np.ndarray:
    return g.g @ V0


def endpoints(g: Frame) -> tuple[BoundaryPoint, BoundaryPoint]:
    """(backward, forward) ideal endpoints of the geodesic through ``g``."""
    back = g.g @ np.array([0.0, -1.0, 1.0])
    fwd = g.g @ np.array([0.0, 1.0, 1.0])
    return BoundaryPoint.from_vector(back), BoundaryPoint.from_vector(fwd)


def hyperbolic_distance(p, q):
    return np.arccosh(np.maximum(-inner(p, q), 1.0))


def frame_on_geodesic(n_minus, n_plus, s: float = 0.0) -> Frame:
    """Frame on the geodesic from ``n_minus`` to ``n_plus`` (future null vectors).

    At ``s = 0`` the basepoint is the point of the geodesic nearest to ``P0``;
    other values of ``s`` flow along the geodesic.
    """
    nm = np.asarray(n_minus, dtype=float)
    nm = nm / nm[2]
    npl = np.asarray(n_plus, dtype=float)
    npl = npl / npl[2]
    k = np.sqrt(-1.0 / (2.0 * inner(nm, npl)))
    point = k * (np.exp(-s) * nm + np.exp(s) * npl)
    tangent = k * (np.exp(s) * npl - np.exp(-s) * nm)
    return Frame(np.column_stack([lorentz_cross(tangent, point), tangent, point]))


def frame_toward(point, boundary) -> Frame:
    """Frame at ``point`` whose direction points at the ideal point ``boundary``."""
    p = np.asarray(point, dtype=float)
    n = boundary.vector if isinstance(boundary, BoundaryPoint) else np.asarray(boundary, float)
    t = n + inner(n, p) * p
    t = t / np.sqrt(norm2(t))
    return frame_from(p, t)


def boost_frame(point) -> Frame:
    """The frame at ``point`` reached from the identity by a pure boost."""
    p = np.asarray(point, dtype=float)
    r = np.hypot(p[0], p[1])
    if r < 1e-15:
        return frame_from(p, U0_DIRECTION)
    return frame_toward(p, np.array([p[0] / r, p[1] / r, 1.0]))


def parallel_transport(v, p, q):
    """Parallel transport of ``v`` in ``T_p H^2`` to ``T_q H^2`` along the geodesic."""
    return v + (inner(q, v) / (1.0 - inner(p, q)))[..., None] * (p + q)


def frame_distance(g: Frame, h: Frame) -> float:
    """Hyperbolic distance between basepoints plus the angle between directions.

    The direction of ``g`` is parallel transported to the basepoint of ``h``
    before the angle is taken.
    """
    p, q = g.basepoint, h.basepoint
    moved = parallel_transport(g.direction[None, :], p[None, :], q[None, :])[0]
    cos = np.clip(inner(moved, h.direction), -1.0, 1.0)
    return float(hyperbolic_distance(p, q) + np.arccos(cos))
