"""Numerical toolkit for Margulis spacetimes: Lorentzian geometry of R^{2,1},
affine deformations of Schottky groups, the neutral section, and the
geodesic-flow experiments built on them."""

__version__ = "0.1.0"

from .affine import (
    AffineIsometry,
    AffinePoint,
    FlowState,
    SpacelikeGeodesic,
    flat_flow,
    invariant_axis,
    margulis_invariant,
)
from .cohomology import ObservableOnOrbit, OrbitSample, birkhoff_average, find_positive_T, transfer_function, verify_coboundary
from .frames import BoundaryPoint, Frame, flow_frame, spacelike_direction
from .lorentz import eigen_frame, inner, translation_length
from .neutralized import (
    PeriodicCorrespondence,
    SectionOnOrbit,
    margulis_density,
    neutral_section,
    neutralize_periodic,
    orbit_equivalence_periodic,
    parallel_uniqueness_check,
)
from .recurrence import RecurrenceReport, recurrence_probe
from .schottky import GroupPresentation, limit_set, reference_deformation, spectrum, verify_ping_pong
from .words import enumerate_classes
