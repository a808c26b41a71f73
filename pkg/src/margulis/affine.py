"""Affine Lorentzian isometries of Minkowski space E = R^{2,1}.

Points of E and vectors of V are kept apart: :class:`AffinePoint` supports
only ``point - point -> vector`` and ``point + vector -> point``.  Points are
stored by their coordinates relative to a fixed origin.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DegenerateAxis
from .lorentz import eigen_frame, inner, lorentz_inverse

AXIS_DEGENERACY_TOL = 1e-12


@dataclass(frozen=True, eq=False)
class AffinePoint:
    coords: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "coords", np.asarray(self.coords, dtype=float))

    def __sub__(self, other):
        if isinstance(other, AffinePoint):
            return self.coords - other.coords
        return NotImplemented

    def __add__(self, vector):
        if isinstance(vector, AffinePoint):
            return NotImplemented
        return AffinePoint(self.coords + np.asarray(vector, dtype=float))

    def __repr__(self):
        return f"AffinePoint({self.coords.tolist()})"


ORIGIN = AffinePoint(np.zeros(3))


@dataclass(frozen=True, eq=False)
class AffineIsometry:
    """``p -> A p + b`` with ``A`` in O(2,1)."""

    linear: np.ndarray
    translation: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "linear", np.asarray(self.linear, dtype=float))
        object.__setattr__(self, "translation", np.asarray(self.translation, dtype=float))

    @classmethod
    def identity(cls) -> "AffineIsometry":
        return cls(np.eye(3), np.zeros(3))

    def __call__(self, p):
        if isinstance(p, AffinePoint):
            return AffinePoint(self.linear @ p.coords + self.translation)
        if isinstance(p, FlowState):
            return FlowState(self(p.point), self.linear @ p.velocity)
        if isinstance(p, SpacelikeGeodesic):
            return SpacelikeGeodesic(self(p.base), self.linear @ p.direction)
        raise TypeError(f"cannot apply an affine isometry to {type(p).__name__}")

    def __matmul__(self, other: "AffineIsometry") -> "AffineIsometry":
        return affine_compose(self, other)

    def inverse(self) -> "AffineIsometry":
        return affine_invert(self)

    def power(self, n: int) -> "AffineIsometry":
        base = self if n >= 0 else self.inverse()
        out = AffineIsometry.identity()
        for _ in range(abs(n)):
            out = out @ base
        return out

    def __repr__(self):
        return (
            f"AffineIsometry(linear={self.linear.tolist()}, "
            f"translation={self.translation.tolist()})"
        )


@dataclass(frozen=True, eq=False)
class FlowState:
    """A tangent vector of E: a point with a velocity."""

    point: AffinePoint
    velocity: np.ndarray

    def __post_init__(self):
        if not isinstance(self.point, AffinePoint):
            object.__setattr__(self, "point", AffinePoint(self.point))
        object.__setattr__(self, "velocity", np.asarray(self.velocity, dtype=float))


@dataclass(frozen=True, eq=False)
class SpacelikeGeodesic:
    base: AffinePoint
    direction: np.ndarray

    def __post_init__(self):
        if not isinstance(self.base, AffinePoint):
            object.__setattr__(self, "base", AffinePoint(self.base))
        object.__setattr__(self, "direction", np.asarray(self.direction, dtype=float))

    def point_at(self, t: float) -> AffinePoint:
        return self.base + t * self.direction

    def offset_from(self, other: "SpacelikeGeodesic") -> np.ndarray:
        """Component of ``other.base - self.base`` Lorentz-orthogonal to the direction."""
        d = other.base - self.base
        return d - inner(d, self.direction) * self.direction

    def same_line(self, other: "SpacelikeGeodesic", tol: float = 1e-9) -> bool:
        """Equal as oriented lines, up to ``tol`` relative to the coordinate scale.

        The gap between the lines is measured with the Euclidean projection:
        the Lorentzian one subtracts ``<d, u> u``, which cancels badly when
        the unit spacelike ``u`` has large coordinates.
        """
        u, v = self.direction, other.direction
        if np.max(np.abs(u - v)) > tol * max(1.0, float(np.max(np.abs(u)))):
            return False
        d = other.base - self.base
        e = u / np.linalg.norm(u)
        gap = np.linalg.norm(d - np.dot(d, e) * e)
        scale = max(1.0, float(np.max(np.abs(self.base.coords))), float(np.max(np.abs(other.base.coords))))
        return bool(gap <= tol * scale)


def affine_compose(g1: AffineIsometry, g2: AffineIsometry) -> AffineIsometry:
    """``g1 o g2``."""
    return AffineIsometry(g1.linear @ g2.linear, g1.linear @ g2.translation + g1.translation)


def affine_invert(g: AffineIsometry) -> AffineIsometry:
    a_inv = lorentz_inverse(g.linear)
    return AffineIsometry(a_inv, -(a_inv @ g.translation))


def flat_flow(state: FlowState, t: float) -> FlowState:
    """``(p, v) -> (p + t v, v)``."""
    return FlowState(state.point + t * state.velocity, state.velocity)


def margulis_invariant(g: AffineIsometry, p: AffinePoint | None = None) -> float:
    """``<g(p) - p, x0>`` with ``x0`` the oriented neutral vector of the linear part."""
    x0 = eigen_frame(g.linear).x0
    p = ORIGIN if p is None else p
    return float(inner(g(p) - p, x0))


def invariant_axis(g: AffineIsometry) -> SpacelikeGeodesic:
    """The spacelike line that ``g`` translates along itself by its Margulis invariant.

    The translation part is split along the eigenbasis ``(x0, x+, x-)``; the
    ``x+`` and ``x-`` components are cancelled by a basepoint in the plane they
    span, solving ``(A - I) q = alpha x0 - b`` one eigen-direction at a time.
    """
    ef = eigen_frame(g.linear)
    b = g.translation
    alpha = float(inner(b, ef.x0))
    if abs(alpha) < AXIS_DEGENERACY_TOL:
        raise DegenerateAxis("Margulis invariant vanishes; the isometry has a fixed point")
    pm = inner(ef.x_plus, ef.x_minus)
    beta_plus = inner(b, ef.x_minus) / pm
    beta_minus = inner(b, ef.x_plus) / pm
    q_plus = -beta_plus / np.expm1(ef.ell)
    q_minus = -beta_minus / np.expm1(-ef.ell)
    q = q_plus * ef.x_plus + q_minus * ef.x_minus
    residual = g.linear @ q + b - q - alpha * ef.x0
    scale = max(1.0, float(np.max(np.abs(b))), float(np.max(np.abs(q))))
    if np.max(np.abs(residual)) > 1e-9 * scale:
        raise DegenerateAxis(f"axis equation residual {np.max(np.abs(residual)):.3g}")
    return SpacelikeGeodesic(AffinePoint(q), ef.x0)


def direction_of(geo: SpacelikeGeodesic) -> np.ndarray:
    return geo.direction.copy()


def random_affine(rng: np.random.Generator, max_boost: float = 2.0, scale: float = 3.0):
    from .lorentz import random_so21

    return AffineIsometry(random_so21(rng, max_boost), rng.uniform(-scale, scale, size=3))


def random_hyperbolic_affine(rng: np.random.Generator, scale: float = 3.0) -> AffineIsometry:
    """Random affine isometry whose linear part is a boost of length in [0.3, 3]."""
    from .lorentz import boost_a, random_so21

    r = random_so21(rng, 1.5)
    lin = r @ boost_a(rng.uniform(0.3, 3.0)) @ np.linalg.inv(r)
    return AffineIsometry(lin, rng.uniform(-scale, scale, size=3))
