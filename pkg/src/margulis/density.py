"""Density of periodic orbits among recurrent spacelike states.

Recurrent states are sampled as frames on geodesics joining two points of the
limit-set approximation, flowed by a few offsets and reduced to the
fundamental domain.  Each is compared with the axes of all reduced words up
to a given length.  Every such axis is a lift of a closed geodesic whose
class has cyclic length at most that bound, so the reported distance is an
upper bound for the distance to the periodic family in the quotient.

Distances use :func:`margulis.frames.frame_distance` (hyperbolic distance of
basepoints plus transported angle), a surrogate for a metric on the unit
tangent bundle.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass

import numpy as np

from .frames import Frame, flow_frame, frame_on_geodesic, parallel_transport
from .lorentz import eigen_frame, inner
from .schottky import GroupPresentation, limit_set, reduce_frame
from .words import reduced_words


@dataclass
class DensityReport:
    samples: int
    axes: int
    max_len: int
    tolerance: float
    directed_hausdorff: float
    mean_distance: float
    passed: bool

    def to_dict(self) -> dict:
        return asdict(self)


def axis_family(G: GroupPresentation, max_len: int):
    """Null endpoint pairs ``(n_minus, n_plus)`` of every reduced word up to ``max_len``."""
    nm, npl = [], []
    for n in range(1, max_len + 1):
        for w in reduced_words(G.rank, n):
            ef = eigen_frame(G.linear(w))
            nm.append(ef.x_minus)
            npl.append(ef.x_plus)
    return np.array(nm), np.array(npl)


def distance_to_axes(frame: Frame, n_minus: np.ndarray, n_plus: np.ndarray) -> np.ndarray:
    """Frame distance from ``frame`` to the axis frame at the foot of its perpendicular.

    One value per oriented axis.  It bounds the distance to the axis orbit
    from above; the true minimum over the orbit trades position for angle.
    """
    p = frame.basepoint
    d = frame.direction
    normal = np.cross(n_minus, n_plus) * np.array([1.0, 1.0, -1.0])
    normal = normal / np.sqrt(inner(normal, normal))[:, None]
    offs = inner(normal, p[None, :])
    foot = p[None, :] - offs[:, None] * normal
    foot = foot / np.sqrt(-inner(foot, foot))[:, None]
    tangent = n_plus + inner(n_plus, foot)[:, None] * foot
    tangent = tangent / np.sqrt(inner(tangent, tangent))[:, None]
    moved = parallel_transport(np.broadcast_to(d, foot.shape), np.broadcast_to(p, foot.shape), foot)
    cos = np.clip(inner(moved, tangent), -1.0, 1.0)
    return np.arcsinh(np.abs(offs)) + np.arccos(cos)


def sample_recurrent_frames(
    G: GroupPresentation,
    rng: np.random.Generator,
    pairs: int = 100,
    limit_len: int = 8,
    offsets=(-2.0, 0.0, 2.0),
) -> list[Frame]:
    pts = limit_set(G, limit_len).points
    out = []
    for _ in range(pairs):
        i, j = rng.choice(len(pts), size=2, replace=False)
        base = frame_on_geodesic(pts[i].vector, pts[j].vector)
        for s in offsets:
            f, _ = reduce_frame(flow_frame(base, s), G)
            out.append(f)
    return out


def density_experiment(
    G: GroupPresentation,
    seed: int = 0,
    pairs: int = 100,
    limit_len: int = 8,
    max_len: int = 8,
    tolerance: float = 0.05,
) -> DensityReport:
    rng = np.random.default_rng(seed)
    frames = sample_recurrent_frames(G, rng, pairs, limit_len)
    nm, npl = axis_family(G, max_len)
    dists = np.array([distance_to_axes(f, nm, npl).min() for f in frames])
    worst = float(dists.max())
    return DensityReport(
        samples=len(frames),
        axes=len(nm),
        max_len=max_len,
        tolerance=tolerance,
        directed_hausdorff=worst,
        mean_distance=float(dists.mean()),
        passed=worst < tolerance,
    )
