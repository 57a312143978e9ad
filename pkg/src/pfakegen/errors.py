"""Exception types shared across the package."""


class PfakeError(Exception):
    """Base class for all pfakegen errors."""


class MissingFrames(PfakeError):
    pass


class CountMismatch(PfakeError):
    pass


class DecodeError(PfakeError):
    pass


class DimensionMismatch(PfakeError):
    pass


class ParseError(PfakeError):
    pass


class TooFewPoints(PfakeError):
    pass


class EmptyMask(PfakeError):
    pass


class DegenerateHull(PfakeError):
    pass


class DegenerateTriangulation(PfakeError):
    pass


class ColumnOutOfRange(PfakeError):
    pass


class ShapeMismatch(PfakeError):
    pass


class TooSmall(PfakeError):
    pass


class FrameFailure(PfakeError):
    """Wraps a per-frame error with the failing frame index."""

    def __init__(self, frame_index, cause):
        super().__init__(f"frame {frame_index}: {cause}")
        self.frame_index = frame_index
        self.cause = cause
