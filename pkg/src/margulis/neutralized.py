"""Neutral and neutralized sections along orbits of the geodesic flow.

A section ``sigma`` of the flat affine bundle over an orbit ``t -> g0 a(t)`` is
stored concretely as a point of E at each grid time.  Over a periodic orbit
of ``gamma`` it must be holonomy equivariant, ``sigma(t + ell) = gamma sigma(t)``.

The neutral section ``nu = g(V0)`` is constant along every orbit, because
``a(t)`` fixes ``V0``.  Its pairing with the flow derivative of ``sigma`` is the
density ``F_sigma``, and the integral of ``F_sigma`` over a period is the
Margulis invariant whichever equivariant ``sigma`` is used: a change of
section adds a periodic function plus the derivative of ``<m, nu>`` for an
equivariant vector field ``m``, and both integrate to zero.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass, field

import numpy as np

from .affine import AffineIsometry, SpacelikeGeodesic, invariant_axis, margulis_invariant
from .cohomology import ObservableOnOrbit, OrbitSample, birkhoff_average, transfer_function
from .errors import GridMismatch, GridTooCoarse, OffsetAlongAxis
from .frames import Frame, frame_on_geodesic, spacelike_direction
from .lorentz import boost_a, eigen_frame, inner
from .schottky import GroupPresentation
from .words import Word, word_to_str

CAUCHY_TOL = 1e-6
DEFAULT_STEP = 2.5e-4
SECTION_KINDS = ("axis", "neutral_wiggle", "transverse")


def neutral_section(g: Frame) -> np.ndarray:
    return spacelike_direction(g)


@dataclass(frozen=True, eq=False)
class SectionOnOrbit:
    """Points ``sigma(t)`` of E over the frame orbit ``frame . a(t)``.

    ``holonomy`` and ``period`` are set for periodic orbits only.
    """

    orbit: OrbitSample
    frame: Frame
    values: np.ndarray  # shape (n, 3)
    word: Word | None = None
    holonomy: AffineIsometry | None = None
    period: float | None = None

    def __post_init__(self):
        v = np.asarray(self.values, dtype=float)
        if v.shape != (self.orbit.n, 3):
            raise GridMismatch(f"section has shape {v.shape}, grid has {self.orbit.n} points")
        object.__setattr__(self, "values", v)

    @property
    def times(self) -> np.ndarray:
        return self.orbit.times

    @property
    def neutral(self) -> np.ndarray:
        return neutral_section(self.frame)

    def frame_at(self, t: float) -> Frame:
        return Frame(self.frame.g @ boost_a(t))

    def equivariance_defect(self) -> float:
        """Max of ``|sigma(t + ell) - gamma sigma(t)|`` over grid pairs one period apart."""
        if self.period is None or self.holonomy is None:
            raise ValueError("equivariance is defined only on periodic orbits")
        k = int(round(self.period / self.orbit.h))
        if not np.isclose(k * self.orbit.h, self.period, rtol=1e-12, atol=0.0) or k >= self.orbit.n:
            raise GridMismatch("grid does not contain two samples one period apart")
        a, b = self.holonomy.linear, self.holonomy.translation
        moved = self.values[:-k] @ a.T + b
        return float(np.max(np.abs(self.values[k:] - moved)))


def margulis_density(sigma: SectionOnOrbit, cauchy_tol: float = CAUCHY_TOL) -> ObservableOnOrbit:
    """``F_sigma = <d sigma / dt, nu>`` by centered differences, on interior points.

    The step is checked against the doubled step: centered differences have
    error ``c h^2``, so ``|F_h - F_2h| / 3`` estimates the error of ``F_h``.
    """
    v, h, n = sigma.values, sigma.orbit.h, sigma.orbit.n
    if n < 5:
        raise GridMismatch("need at least five samples")
    nu = sigma.neutral
    paired = v @ (nu * np.array([1.0, 1.0, -1.0]))
    f = (paired[2:] - paired[:-2]) / (2.0 * h)
    f2 = (paired[4:] - paired[:-4]) / (4.0 * h)
    err = float(np.max(np.abs(f[1:-1] - f2))) / 3.0
    if err > cauchy_tol:
        raise GridTooCoarse(f"finite-difference error estimate {err:.3g} exceeds {cauchy_tol:g}")
    orbit = OrbitSample(sigma.orbit.t0 + h, h, n - 2, dict(sigma.orbit.meta))
    return ObservableOnOrbit(orbit, f)


def period_integral(sigma: SectionOnOrbit, cauchy_tol: float = CAUCHY_TOL) -> float:
    """Trapezoid integral of ``F_sigma`` over the first full period of the interior grid."""
    if sigma.period is None:
        raise ValueError("period integral needs a periodic orbit")
    dens = margulis_density(sigma, cauchy_tol)
    k = int(round(sigma.period / sigma.orbit.h))
    if not np.isclose(k * sigma.orbit.h, sigma.period, rtol=1e-12, atol=0.0) or k >= dens.orbit.n:
        raise GridMismatch("grid does not cover a whole period")
    f = dens.values[: k + 1]
    return float(sigma.orbit.h * (f.sum() - 0.5 * (f[0] + f[-1])))


# -- periodic orbits --------------------------------------------------------


def periodic_frame(A) -> Frame:
    """Frame on the axis of ``A`` moving towards the attracting fixed point.

    Satisfies ``A g0 = g0 a(ell)``; its basepoint is the axis point nearest ``P0``.
    """
    ef = eigen_frame(A)
    return frame_on_geodesic(ef.x_minus, ef.x_plus)


def _grid(ell: float, h_max: float, periods: float):
    per = int(np.ceil(ell / h_max))
    h = ell / per
    half = int(round(periods * per / 2))
    # two extra samples on each side so centered differences cover the window
    return OrbitSample(-half * h - 2 * h, h, 2 * half + 5)


def section_on_periodic_orbit(
    word: Word,
    G: GroupPresentation,
    kind: str = "axis",
    h: float = DEFAULT_STEP,
    periods: float = 1.0,
    amplitude: float = 1.0,
) -> SectionOnOrbit:
    """An equivariant section over the periodic orbit of ``word``.

    ``kind`` selects one of three sections:

    ``axis``
        the invariant axis at constant speed, ``q + (alpha/ell) t x0``;
    ``neutral_wiggle``
        the axis section plus ``k(t) nu`` with ``k`` periodic, of amplitude
        ``amplitude * |alpha| / pi`` so the density changes sign when
        ``amplitude > 1/2``;
    ``transverse``
        the axis section plus ``g0 a(t) c(t)`` with ``c`` periodic and
        components along ``nu`` and both null directions, the latter scaled
        by ``exp(-ell/2)`` so the section stays bounded on a centered window.

    The grid step is the largest ``ell / N`` not exceeding ``h`` and the
    window spans ``periods`` periods centered at ``t = 0``.
    """
    if kind not in SECTION_KINDS:
        raise ValueError(f"unknown section kind {kind!r}; expected one of {SECTION_KINDS}")
    gamma = G.element(word)
    ef = eigen_frame(gamma.linear)
    ell = ef.ell
    alpha = margulis_invariant(gamma)
    axis = invariant_axis(gamma)
    g0 = periodic_frame(gamma.linear)
    orbit = _grid(ell, h, periods)
    orbit = OrbitSample(orbit.t0, orbit.h, orbit.n, {"word": word_to_str(word), "kind": kind})
    t = orbit.times
    nu = neutral_section(g0)
    values = axis.base.coords + np.outer(alpha / ell * t, nu)
    omega = 2.0 * np.pi / ell
    if kind == "neutral_wiggle":
        values = values + np.outer(amplitude * abs(alpha) / np.pi * np.sin(omega * t), nu)
    elif kind == "transverse":
        small = 0.1 * amplitude * np.exp(-ell / 2.0)
        n_plus = np.array([0.0, 1.0, 1.0])
        n_minus = np.array([0.0, -1.0, 1.0])
        local = (
            np.outer(0.3 * amplitude * np.sin(omega * t + 0.7), [1.0, 0.0, 0.0])
            + np.outer(small * np.exp(t) * (1.0 + 0.5 * np.cos(omega * t)), n_plus)
            + np.outer(small * np.exp(-t) * np.sin(2.0 * omega * t), n_minus)
        )
        values = values + local @ g0.g.T
    return SectionOnOrbit(orbit, g0, values, tuple(word), gamma, ell)


def periodic_density(sigma: SectionOnOrbit, span: float) -> ObservableOnOrbit:
    """``F_sigma`` on a periodic orbit, extended periodically to cover ``span``."""
    if sigma.period is None:
        raise ValueError("periodic extension needs a periodic orbit")
    dens = margulis_density(sigma)
    k = int(round(sigma.period / sigma.orbit.h))
    if k > dens.orbit.n:
        raise GridMismatch("section does not cover a whole period")
    one = dens.values[:k]
    reps = int(np.ceil((span / sigma.orbit.h + 1) / k))
    values = np.tile(one, reps)
    n = int(np.ceil(span / sigma.orbit.h)) + 1
    orbit = OrbitSample(dens.orbit.t0, dens.orbit.h, n, dict(dens.orbit.meta))
    return ObservableOnOrbit(orbit, values[:n])


def density_family(G: GroupPresentation, words, span: float, kind: str = "neutral_wiggle", **kw):
    return [periodic_density(section_on_periodic_orbit(w, G, kind, **kw), span) for w in words]


def neutralize_section(sigma: SectionOnOrbit, T: float):
    """``N_hat = sigma + g nu`` with ``g`` the transfer function of ``F_sigma``.

    Returns ``(N_hat, F_T)``; the density of ``N_hat`` is ``F_T``.
    """
    dens = margulis_density(sigma)
    g = transfer_function(dens, T)
    # the density grid starts one step into the section grid
    base = sigma.values[1 : 1 + g.orbit.n]
    corrected = base + np.outer(g.values, sigma.neutral)
    section = SectionOnOrbit(g.orbit, sigma.frame, corrected, sigma.word, sigma.holonomy, sigma.period)
    return section, birkhoff_average(dens, T)


def neutralize_periodic(word: Word, G: GroupPresentation, h: float = DEFAULT_STEP, periods: float = 1.0):
    """Constant-speed axis section of ``word`` and its constant density ``alpha / ell``.

    A negative density is reported as is; flipping the sign of every
    translation makes it positive.
    """
    sigma = section_on_periodic_orbit(word, G, "axis", h=h, periods=periods)
    alpha = margulis_invariant(sigma.holonomy)
    fhat = np.full(sigma.orbit.n, alpha / sigma.period)
    return sigma, ObservableOnOrbit(sigma.orbit, fhat)


# -- orbit equivalence on periodic orbits ------------------------------------


@dataclass(frozen=True, eq=False)
class PeriodicCorrespondence:
    word: Word
    surface_period: float
    spacetime_period: float
    axis: SpacelikeGeodesic
    frame: Frame

    @property
    def slope(self) -> float:
        """Time change ``t -> slope * t`` from the surface orbit to the axis."""
        return self.spacetime_period / self.surface_period

    def time_reparam(self, t):
        return self.slope * np.asarray(t, dtype=float)

    @property
    def neutral(self) -> np.ndarray:
        return neutral_section(self.frame)

    def to_dict(self) -> dict:
        return {
            "word": word_to_str(self.word),
            "ell": self.surface_period,
            "alpha": self.spacetime_period,
            "alpha_over_ell": self.slope,
            # adding 0.0 turns -0.0 into 0.0
            "axis_base": (self.axis.base.coords + 0.0).tolist(),
            "axis_direction": (self.axis.direction + 0.0).tolist(),
        }


def orbit_equivalence_periodic(word: Word, G: GroupPresentation) -> PeriodicCorrespondence:
    gamma = G.element(word)
    ell = eigen_frame(gamma.linear).ell
    alpha = margulis_invariant(gamma)
    return PeriodicCorrespondence(tuple(word), ell, alpha, invariant_axis(gamma), periodic_frame(gamma.linear))


def axes_distinct(a: SpacelikeGeodesic, b: SpacelikeGeodesic, tol: float = 1e-9) -> bool:
    """False when the two oriented axes lie on the same line with the same orientation."""
    return not a.same_line(b, tol)


CORRESPONDENCE_COLUMNS = [
    "word", "ell", "alpha", "alpha_over_ell",
    "base_x", "base_y", "base_z", "dir_x", "dir_y", "dir_z",
]


def correspondence_rows(items) -> list[dict]:
    rows = []
    for c in items:
        d = c.to_dict()
        row = {k: d[k] for k in ("word", "ell", "alpha", "alpha_over_ell")}
        row.update(zip(("base_x", "base_y", "base_z"), d["axis_base"]))
        row.update(zip(("dir_x", "dir_y", "dir_z"), d["axis_direction"]))
        rows.append(row)
    return rows


def write_correspondences_csv(items, path) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=CORRESPONDENCE_COLUMNS)
        writer.writeheader()
        for row in correspondence_rows(items):
            writer.writerow({k: (v if isinstance(v, str) else repr(float(v))) for k, v in row.items()})


def write_correspondences_json(items, path) -> None:
    with open(path, "w") as fh:
        json.dump([c.to_dict() for c in items], fh, indent=2)


# -- parallel geodesics -----------------------------------------------------


@dataclass
class DivergenceReport:
    word: str
    surface_period: float
    forward_growth: float
    backward_growth: float
    expected_growth: float
    forward_offsets: list = field(default_factory=list)
    backward_offsets: list = field(default_factory=list)

    @property
    def growth(self) -> float:
        return max(self.forward_growth, self.backward_growth)


def _transverse_size(offset, ef) -> float:
    pm = inner(ef.x_plus, ef.x_minus)
    return float(abs(inner(offset, ef.x_minus) / pm) + abs(inner(offset, ef.x_plus) / pm))


def parallel_uniqueness_check(
    word: Word,
    G: GroupPresentation,
    offset,
    periods: int = 4,
    max_offset: float = 0.1,
) -> DivergenceReport:
    """Follow the line ``axis + offset`` (same direction) under powers of ``gamma``.

    The transverse offset is measured by its ``x-`` and ``x+`` coefficients
    after each period, forward under ``gamma`` and backward under its inverse.
    Growth factors are ratios over the last period.
    """
    offset = np.asarray(offset, dtype=float)
    size = float(np.linalg.norm(offset))
    if size > max_offset:
        raise ValueError(f"offset norm {size:.3g} exceeds {max_offset}")
    gamma = G.element(word)
    ef = eigen_frame(gamma.linear)
    axis = invariant_axis(gamma)
    if size == 0.0 or _transverse_size(offset, ef) <= 1e-9 * size:
        raise OffsetAlongAxis("offset is parallel to the neutral direction of the axis")
    line = SpacelikeGeodesic(axis.base + offset, axis.direction)

    def follow(g: AffineIsometry):
        sizes = [_transverse_size(axis.offset_from(line), ef)]
        cur = line
        for _ in range(periods):
            cur = g(cur)
            sizes.append(_transverse_size(axis.offset_from(cur), ef))
        return sizes

    fwd = follow(gamma)
    bwd = follow(gamma.inverse())
    return DivergenceReport(
        word=word_to_str(word),
        surface_period=ef.ell,
        forward_growth=fwd[-1] / fwd[-2],
        backward_growth=bwd[-1] / bwd[-2],
        expected_growth=float(np.exp(ef.ell)),
        forward_offsets=fwd,
        backward_offsets=bwd,
    )
