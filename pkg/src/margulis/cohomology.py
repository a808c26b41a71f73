"""Birkhoff averages and explicit coboundaries along sampled flow orbits.

Everything operates on an observable ``f`` sampled at ``f(phi_t x)`` on a
uniform time grid.  For a window ``T``::

    f_T(x) = (1/T) int_0^T f(phi_s x) ds
    g(x)   = (1/T) int_0^T int_0^t f(phi_s x) ds dt

and ``f_T - f`` equals the derivative of ``g`` along the flow.  Both
integrals are evaluated from trapezoid prefix sums in O(N), so the error is
O(h^2) in the grid step.  Windows that are not a whole number of steps are
closed by integrating the linear interpolant over the final partial cell.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import GridMismatch, InsufficientHorizon

POSITIVITY_TOL = 1e-8


@dataclass(frozen=True, eq=False)
class OrbitSample:
    """Uniform time grid ``t0 + k h``, ``k = 0..n-1``, along one flow orbit."""

    t0: float
    h: float
    n: int
    meta: dict = field(default_factory=dict)

    @property
    def times(self) -> np.ndarray:
        return self.t0 + self.h * np.arange(self.n)

    @property
    def span(self) -> float:
        return self.h * (self.n - 1)

    def truncated(self, n: int) -> "OrbitSample":
        return OrbitSample(self.t0, self.h, n, dict(self.meta))

    def same_grid(self, other: "OrbitSample") -> bool:
        return (
            self.n == other.n
            and np.isclose(self.h, other.h, rtol=1e-12, atol=0.0)
            and np.isclose(self.t0, other.t0, rtol=0.0, atol=1e-12 * max(1.0, abs(self.h)))
        )


@dataclass(frozen=True, eq=False)
class ObservableOnOrbit:
    orbit: OrbitSample
    values: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.values, dtype=float)
        if v.shape != (self.orbit.n,):
            raise GridMismatch(f"{v.shape[0]} values for a grid of {self.orbit.n} points")
        object.__setattr__(self, "values", v)

    @classmethod
    def sample(cls, func, t0: float, h: float, n: int, **meta) -> "ObservableOnOrbit":
        orbit = OrbitSample(t0, h, n, meta)
        return cls(orbit, np.asarray(func(orbit.times), dtype=float))

    @property
    def times(self) -> np.ndarray:
        return self.orbit.times

    def __add__(self, other: "ObservableOnOrbit") -> "ObservableOnOrbit":
        _check_grids(self, other)
        return ObservableOnOrbit(self.orbit, self.values + other.values)

    def __sub__(self, other: "ObservableOnOrbit") -> "ObservableOnOrbit":
        _check_grids(self, other)
        return ObservableOnOrbit(self.orbit, self.values - other.values)

    def __mul__(self, c: float) -> "ObservableOnOrbit":
        return ObservableOnOrbit(self.orbit, c * self.values)

    __rmul__ = __mul__

    def truncated(self, n: int) -> "ObservableOnOrbit":
        return ObservableOnOrbit(self.orbit.truncated(n), self.values[:n])

    def to_csv(self, path) -> None:
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["time", "value"])
            for t, v in zip(self.times, self.values):
                writer.writerow([repr(float(t)), repr(float(v))])

    @classmethod
    def from_csv(cls, path, **meta) -> "ObservableOnOrbit":
        with open(path, newline="") as fh:
            rows = list(csv.DictReader(fh))
        t = np.array([float(r["time"]) for r in rows])
        v = np.array([float(r["value"]) for r in rows])
        if len(t) < 2:
            raise GridMismatch("need at least two samples")
        h = (t[-1] - t[0]) / (len(t) - 1)
        if not np.allclose(np.diff(t), h, rtol=1e-9, atol=1e-12):
            raise GridMismatch(f"{Path(path).name}: time grid is not uniform")
        return cls(OrbitSample(float(t[0]), float(h), len(t), meta), v)


def _check_grids(*obs: ObservableOnOrbit) -> None:
    first = obs[0].orbit
    for o in obs[1:]:
        if not first.same_grid(o.orbit):
            raise GridMismatch("observables are sampled on different grids")


def _prefix_integral(values: np.ndarray, h: float) -> np.ndarray:
    out = np.empty_like(values)
    out[0] = 0.0
    np.cumsum(0.5 * h * (values[1:] + values[:-1]), out=out[1:])
    return out


def _window(orbit: OrbitSample, T: float):
    if T <= 0:
        raise ValueError("averaging window must be positive")
    steps = T / orbit.h
    m = int(np.floor(steps + 1e-9))
    frac = max(steps - m, 0.0) if steps - m > 1e-9 else 0.0
    need = m + (1 if frac > 0 else 0)
    n_out = orbit.n - need
    if n_out < 1:
        raise InsufficientHorizon(
            f"window T={T} needs {need + 1} samples, orbit has {orbit.n}"
        )
    return m, frac, n_out


def _windowed_integral(values: np.ndarray, h: float, m: int, frac: float, n_out: int):
    """``int_{t_i}^{t_i + T} F`` for each output index, with ``T = (m + frac) h``."""
    prefix = _prefix_integral(values, h)
    idx = np.arange(n_out)
    total = prefix[idx + m] - prefix[idx]
    if frac > 0:
        lo = values[idx + m]
        hi = values[idx + m + 1]
        total = total + frac * h * (lo + 0.5 * frac * (hi - lo))
    return total


def birkhoff_average(f: ObservableOnOrbit, T: float) -> ObservableOnOrbit:
    """``f_T`` on the truncated grid whose windows stay inside the sample."""
    m, frac, n_out = _window(f.orbit, T)
    total = _windowed_integral(f.values, f.orbit.h, m, frac, n_out)
    return ObservableOnOrbit(f.orbit.truncated(n_out), total / T)


def transfer_function(f: ObservableOnOrbit, T: float) -> ObservableOnOrbit:
    """The coboundary ``g`` with ``f_T - f = d/dt g(phi_t x)``.

    Writing ``I`` for the running integral of ``f``,
    ``g(t_i) = (1/T) int_{t_i}^{t_i+T} I - I(t_i)``.
    """
    m, frac, n_out = _window(f.orbit, T)
    h = f.orbit.h
    running = _prefix_integral(f.values, h)
    outer = _windowed_integral(running, h, m, 0.0, n_out)
    if frac > 0:
        # f linear on the partial cell, so I is quadratic there
        idx = np.arange(n_out)
        lo = f.values[idx + m]
        hi = f.values[idx + m + 1]
        th = frac * h
        outer = outer + th * running[idx + m] + th**2 / 2 * lo + th**3 / (6 * h) * (hi - lo)
    g = outer / T - running[:n_out]
    return ObservableOnOrbit(f.orbit.truncated(n_out), g)


@dataclass(frozen=True)
class CoboundaryResidual:
    max_abs: float
    rms: float
    points: int


def flow_derivative(g: ObservableOnOrbit) -> np.ndarray:
    """Centered differences on interior points (length ``n - 2``)."""
    v = g.values
    return (v[2:] - v[:-2]) / (2.0 * g.orbit.h)


def verify_coboundary(
    f: ObservableOnOrbit, fT: ObservableOnOrbit, g: ObservableOnOrbit
) -> CoboundaryResidual:
    """Residual of ``f_T - f - phi(g)`` on interior grid points."""
    n = min(fT.orbit.n, g.orbit.n)
    if not (fT.orbit.same_grid(g.orbit) and f.orbit.truncated(n).same_grid(g.orbit)):
        raise GridMismatch("f, f_T and g must share a grid (f may be longer)")
    if n < 3:
        raise GridMismatch("need at least three common samples")
    r = fT.values[1:-1] - f.values[1 : n - 1] - flow_derivative(g)
    return CoboundaryResidual(float(np.max(np.abs(r))), float(np.sqrt(np.mean(r**2))), len(r))


@dataclass(frozen=True)
class PositivityResult:
    success: bool
    T: float | None
    min_values: dict  # T -> min of f_T over all orbits
    witness: tuple | None = None  # (orbit index, time, value) at the last T tried


def find_positive_T(
    observables, T_grid, tol: float = POSITIVITY_TOL
) -> PositivityResult:
    """Least ``T`` in ``T_grid`` with ``min f_T > tol`` on every supplied orbit."""
    observables = list(observables)
    minima = {}
    witness = None
    for T in sorted(T_grid):
        worst = (None, None, np.inf)
        for i, f in enumerate(observables):
            fT = birkhoff_average(f, T)
            k = int(np.argmin(fT.values))
            if fT.values[k] < worst[2]:
                worst = (i, float(fT.times[k]), float(fT.values[k]))
        minima[float(T)] = worst[2]
        if worst[2] > tol:
            return PositivityResult(True, float(T), minima)
        witness = worst
    return PositivityResult(False, None, minima, witness)
