"""Exception hierarchy for the ledloc library.

Every failure mode that callers are expected to handle derives from
:class:`LedlocError`, so harness code can count trial failures with a
single except clause while programming errors (bad arguments, broken
invariants) still surface as ordinary ``ValueError``/``TypeError``.
"""


class LedlocError(Exception):
    """Base class for all recoverable ledloc failures."""


class OutOfRangeError(LedlocError):
    """Accelerometer reading exceeds gravity; attitude is unresolvable."""


class UnprojectableError(LedlocError):
    """Forward projection hit a tangent singularity or a non-positive depth."""


class BehindCameraError(LedlocError):
    """Rotated depth is non-positive in the rotation-matrix projector."""


class UnreachableError(LedlocError):
    """No tilt below 90 degrees brings the target into the field of view."""


class CoincidentPointsError(LedlocError):
    """The two reference projections coincide; no baseline direction."""


class DegenerateBaselineError(LedlocError):
    """Reference projections have (near-)equal x offsets; depth is unobservable."""


class TangentSingularityError(LedlocError):
    """A tilt-compensated angle reached 90 degrees; virtual point is at infinity."""


class DegenerateSceneError(LedlocError):
    """Calibration scene yields a non-positive conversion constant."""


class InfeasibleShapeError(LedlocError):
    """Grid shape cannot host a balanced color code with a header row."""


class CapExceededError(LedlocError):
    """Requested enumeration is larger than the configured cap."""


class NoHeaderError(LedlocError):
    """No rotation of the observed grid exposes a valid all-red header row."""


class AmbiguousHeaderError(LedlocError):
    """More than one rotation of the observed grid has a valid header row."""


class GridMismatchError(LedlocError):
    """Blob count or layout is inconsistent with every registered grid shape."""


class UnknownLandmarkError(LedlocError):
    """Decoded color code is not present in the landmark registry."""


class FrameError(LedlocError):
    """Position fix is already expressed in the requested frame."""


class ConfigError(LedlocError):
    """Scenario, scene, or registry document is malformed."""
