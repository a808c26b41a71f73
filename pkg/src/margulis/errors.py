"""Exception types raised across the package."""

from __future__ import annotations


class MargulisError(ValueError):
    """Base class for every domain error raised by this package."""


class InvalidLorentzTransform(MargulisError):
    pass


class NotHyperbolic(MargulisError):
    pass


class InvalidFrameData(MargulisError):
    pass


class DegenerateAxis(MargulisError):
    pass


class DisksOverlap(MargulisError):
    def __init__(self, first: str, second: str):
        super().__init__(f"ping-pong disks for {first!r} and {second!r} intersect")
        self.first = first
        self.second = second


class ContainmentViolated(MargulisError):
    def __init__(self, letter: str, witness_angle: float):
        super().__init__(
            f"letter {letter!r} maps boundary angle {witness_angle:.6f} "
            "outside its ping-pong disk"
        )
        self.letter = letter
        self.witness_angle = witness_angle


class IterationCapExceeded(MargulisError):
    pass


class InsufficientHorizon(MargulisError):
    pass


class GridMismatch(MargulisError):
    pass


class GridTooCoarse(MargulisError):
    pass


class OffsetAlongAxis(MargulisError):
    pass
