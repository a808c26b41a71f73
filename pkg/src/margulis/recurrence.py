"""Recurrence probes for geodesics of the flat quotient E / Gamma.

A state ``s = (q, v)`` in E x V recurs when some ``gamma`` in Gamma brings
``flat_flow(s, t)`` back near ``s`` for large ``|t|``.  Topological
recurrence is replaced by an epsilon-return within a finite horizon, in both
time directions, ignoring ``|t| < t_min``.

Candidate group elements come from the direction of ``v``: the velocity
never changes along a flat geodesic, so only elements whose linear part
nearly fixes ``v`` can produce a return.  The direction is turned into a path
of frames in H^2 (a point for timelike ``v``, the dual geodesic for spacelike
``v``, the geodesic through ``P0`` towards the ideal point for null ``v``);
the path is reduced to the fundamental domain, and the reduction words
``w(s)`` give candidates ``w(0)^{-1} u w(s)`` for short ``u``.

Distances between states are measured in the orthonormal frame ``F`` of the
start state::

    d((q, v), (q', v')) = |F^{-1}(q - q')| + |F^{-1}(v - v')|

This is a surrogate for a bundle metric on T M; the quotient carries no
canonical one.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass, field

import numpy as np

from .affine import AffinePoint, FlowState, flat_flow, invariant_axis
from .frames import (
    P0,
    BoundaryPoint,
    Frame,
    boost_frame,
    flow_frame,
    frame_on_geodesic,
    frame_toward,
    lift_to_sheet,
)
from .lorentz import CausalType, boost_a, causal_type, lorentz_inverse, norm2, null_pair, rotation
from .schottky import GroupPresentation, reduce_frame
from .words import Word, free_reduce, inverse, reduced_words


@dataclass
class RecurrenceReport:
    kind: str
    returned: bool
    best_return_distance: float
    forward_distance: float
    backward_distance: float
    forward_time: float
    backward_time: float
    horizon: float
    t_min: float
    dt: float
    candidates: int
    escape_times: list = field(default_factory=list)
    escape_profile: list = field(default_factory=list)
    backward_escape_profile: list = field(default_factory=list)

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: dict) -> "RecurrenceReport":
        return cls(**data)


def _start_frame(state: FlowState):
    v = state.velocity
    kind = causal_type(v)
    if kind is CausalType.ZERO:
        raise ValueError("recurrence probe needs a nonzero velocity")
    if kind is CausalType.TIMELIKE:
        u = v if v[2] > 0 else -v
        return kind, boost_frame(lift_to_sheet(u / np.sqrt(-norm2(u))))
    if kind is CausalType.SPACELIKE:
        n_minus, n_plus = null_pair(v / np.sqrt(norm2(v)))
        return kind, frame_on_geodesic(n_minus, n_plus)
    xi = BoundaryPoint.from_vector(v)
    return kind, frame_toward(P0, xi)


def _reduction_words(G: GroupPresentation, start: Frame, times) -> list[Word]:
    """Reduction word at each path time, warm-started from the neighbouring sample."""
    words: dict[float, Word] = {}
    for branch in (times[times >= 0], times[times < 0][::-1]):
        prev: Word = ()
        for s in branch:
            _, w = reduce_frame(flow_frame(start, float(s)), G, start=prev)
            words[float(s)] = w
            prev = w
    return [words[float(s)] for s in times]


def candidate_words(
    G: GroupPresentation,
    state: FlowState,
    frame_horizon: float = 24.0,
    frame_step: float = 0.05,
    neighbor_len: int = 1,
) -> list[Word]:
    kind, start = _start_frame(state)
    if kind is CausalType.TIMELIKE:
        times = np.array([0.0])
    else:
        n = int(round(frame_horizon / frame_step))
        times = frame_step * np.arange(-n, n + 1)
    words = _reduction_words(G, start, times)
    base_inv = inverse(words[int(np.argmin(np.abs(times)))])
    shells = [()] + [u for k in range(1, neighbor_len + 1) for u in reduced_words(G.rank, k)]
    out = set()
    for w in set(words):
        for u in shells:
            out.add(free_reduce(base_inv + u + w))
    return sorted(out, key=lambda w: (len(w), w))


def _window_minimum(c, a, dv, dt, lo, hi):
    """Per-candidate grid minimum of ``|c + t a| + dv`` over ``t = k dt`` in ``[lo, hi]``."""
    k_lo, k_hi = int(np.ceil(lo / dt - 1e-9)), int(np.floor(hi / dt + 1e-9))
    aa = np.einsum("ij,ij->i", a, a)
    t_star = -np.einsum("ij,ij->i", c, a) / aa
    k_star = np.clip(t_star / dt, k_lo, k_hi)
    best_d = np.full(len(c), np.inf)
    best_t = np.zeros(len(c))
    for k in (np.floor(k_star), np.ceil(k_star)):
        k = np.clip(k, k_lo, k_hi)
        t = k * dt
        d = np.linalg.norm(c + t[:, None] * a, axis=1) + dv
        better = d < best_d
        best_d[better] = d[better]
        best_t[better] = t[better]
    return best_d, best_t


def recurrence_probe(
    start: FlowState,
    G: GroupPresentation,
    eps: float = 1e-2,
    t_max: float = 200.0,
    dt: float = 0.01,
    t_min: float = 1.0,
    frame_horizon: float = 24.0,
    frame_step: float = 0.05,
    neighbor_len: int = 1,
    profile_points: int = 201,
) -> RecurrenceReport:
    """Search for an ``eps``-return of the flat geodesic through ``start``.

    ``frame_horizon`` bounds how far along the direction path candidate
    elements are collected.  Candidates from farther out have matrix entries
    of size ``exp(frame_horizon)`` and their round-off exceeds ``eps`` beyond
    roughly 30, so longer returns are not resolvable in double precision.
    """
    kind, frame = _start_frame(start)
    words = candidate_words(G, start, frame_horizon, frame_step, neighbor_len)
    elems = [G.element(w) for w in words]
    A = np.array([e.linear for e in elems])
    b = np.array([e.translation for e in elems])
    f_inv = lorentz_inverse(frame.g)
    q0 = start.point.coords
    v = start.velocity
    Av = A @ v
    c = (A @ q0 + b - q0) @ f_inv.T
    a = Av @ f_inv.T
    dv = np.linalg.norm((Av - v) @ f_inv.T, axis=1)

    results = {}
    for name, lo, hi in (("forward", t_min, t_max), ("backward", -t_max, -t_min)):
        d, t = _window_minimum(c, a, dv, dt, lo, hi)
        hits = np.nonzero(d < eps)[0]
        if hits.size:
            # first return: nearest to t = 0 among the returning candidates
            i = hits[np.argmin(np.abs(t[hits]))]
        else:
            i = int(np.argmin(d))
        results[name] = (float(d.min()), float(t[i]))

    grid = dt * np.round(np.linspace(0.0, t_max, profile_points) / dt)
    # the profile uses flat_flow literally; the minimum over candidates is vectorized
    profiles = []
    for sign in (1.0, -1.0):
        pts = np.array([flat_flow(start, sign * t).point.coords for t in grid])
        moved = np.einsum("mij,tj->mti", A, pts) + b[:, None, :] - q0
        dist = np.linalg.norm(moved @ f_inv.T, axis=2) + dv[:, None]
        profiles.append(dist.min(axis=0))

    fwd_d, fwd_t = results["forward"]
    bwd_d, bwd_t = results["backward"]
    best = max(fwd_d, bwd_d)
    return RecurrenceReport(
        kind=kind.value,
        returned=bool(best < eps),
        best_return_distance=best,
        forward_distance=fwd_d,
        backward_distance=bwd_d,
        forward_time=fwd_t,
        backward_time=bwd_t,
        horizon=float(t_max),
        t_min=float(t_min),
        dt=float(dt),
        candidates=len(words),
        escape_times=grid.tolist(),
        escape_profile=profiles[0].tolist(),
        backward_escape_profile=profiles[1].tolist(),
    )


def eventually_monotone(profile, tail: float = 0.5, tol: float = 1e-9) -> bool:
    """True when the last ``tail`` fraction of the profile is nondecreasing."""
    p = np.asarray(profile, dtype=float)
    start = int(len(p) * (1.0 - tail))
    return bool(np.all(np.diff(p[start:]) >= -tol))


# -- probe factories -------------------------------------------------------


def random_timelike_state(rng: np.random.Generator, spread: float = 2.0, box: float = 5.0):
    """Unit timelike velocity within ``spread`` of ``P0``, at a random point of a box."""
    u = rotation(rng.uniform(0, 2 * np.pi)) @ boost_a(rng.uniform(0, spread)) @ P0
    if rng.random() < 0.5:
        u = -u
    return FlowState(AffinePoint(rng.uniform(-box, box, size=3)), u)


def off_limit_null_state(G: GroupPresentation, rng: np.random.Generator, box: float = 5.0):
    """Null velocity pointing at a boundary angle outside every ping-pong arc.

    The limit set lies inside the union of the arcs, so such a direction is in
    the domain of discontinuity.
    """
    while True:
        theta = rng.uniform(-np.pi, np.pi)
        if not any(d.contains(theta) for d in G.disks.values()):
            break
    v = BoundaryPoint.from_angle(theta).vector * rng.uniform(0.5, 2.0)
    return FlowState(AffinePoint(rng.uniform(-box, box, size=3)), v)


def axis_state(G: GroupPresentation, word: Word, shift: float = 0.0) -> FlowState:
    """A state on the invariant axis of ``word``, moving along the axis direction."""
    axis = invariant_axis(G.element(word))
    return FlowState(axis.point_at(shift), axis.direction)
