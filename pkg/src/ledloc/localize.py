"""Inverse positioning pipeline: tilt compensation, derotation, triangle solve.

The chain undoes ``camera.project_tangent_model`` stage by stage:

    observation --tilt_compensate--> virtual zero-tilt points
                --derotate---------> zero-azimuth points (equal py)
                --locate_2d/3d-----> centimeters in the cell frame

Tilt compensation runs before derotation: the derotation geometry treats
the two reference projections as a rigidly rotated horizontal pair, which
is only true on the virtual (zero-tilt) plane.

A :class:`PositionFix` expresses the *device* position relative to the
reference LED A's ground projection, so the triangle solve's output (A
relative to the camera axis) is negated on the way out.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

from .camera import (
    AccelSample,
    CameraParams,
    ImagePointF,
    attitude_from_accel,
    normalize_angle_deg,
)
from .errors import (
    CoincidentPointsError,
    DegenerateBaselineError,
    TangentSingularityError,
)

# Below half a quantization step the depth estimate is pure noise.
MIN_BASELINE_SPLIT_PX = 0.25


@dataclass(frozen=True)
class ReferenceObservation:
    """Projections of the two header-endpoint LEDs plus sensor context.

    ``a_px`` is the right end of the red header row in the code's
    canonical orientation (larger room x), ``b_px`` the left end;
    ``baseline_l_cm`` is their known physical separation.
    """

    a_px: ImagePointF
    b_px: ImagePointF
    baseline_l_cm: float
    accel: AccelSample = AccelSample()

    def __post_init__(self):
        if self.a_px == self.b_px:
            raise ValueError("reference projections must be distinct")
        if self.baseline_l_cm <= 0:
            raise ValueError("baseline_l_cm must be positive")


@dataclass(frozen=True)
class AzimuthSolution:
    """Derotation result: azimuth estimate and the aligned point pair."""

    psi_deg: float
    omega_deg: float
    r1_px: float
    r2_px: float
    a_pp: ImagePointF
    b_pp: ImagePointF


class FixFrame(Enum):
    CELL_LOCAL = "cell_local"
    WORLD = "world"


@dataclass(frozen=True)
class PositionFix:
    """Device position (cm) plus estimated azimuth and coordinate frame."""

    x_cm: float
    y_cm: float
    z_cm: float
    azimuth_deg: float
    frame: FixFrame = FixFrame.CELL_LOCAL


def locate_2d(
    p: ImagePointF, z_cm: float, cam: CameraParams
) -> tuple[float, float]:
    """Recover (x, y) of a single source at known height from its projection.

    Inputs must already be derotated and tilt-compensated. Inverse of the
    zero-attitude pinhole stage: x = (px - Hx) * z / focal_px, same for y.
    """
    if z_cm <= 0:
        raise ValueError("z_cm must be positive")
    hx, hy = cam.principal_point
    scale = z_cm / cam.focal_px
    return (p.px - hx) * scale, (p.py - hy) * scale


def locate_3d(
    obs_a: ImagePointF, obs_b: ImagePointF, l_cm: float, cam: CameraParams
) -> tuple[float, float, float]:
    """Recover (x, y, z) of reference LED A from both aligned projections.

    With the baseline length L known, x offsets of both points from the
    principal point fix the depth:

        x = L * pxa / (pxa - pxb)
        y = L * py  / (pxa - pxb)
        z = L * focal_px / (pxa - pxb)
    """
    if l_cm <= 0:
        raise ValueError("l_cm must be positive")
    hx, hy = cam.principal_point
    pxa = obs_a.px - hx
    pxb = obs_b.px - hx
    py = obs_a.py - hy
    split = pxa - pxb
    if abs(split) < MIN_BASELINE_SPLIT_PX:
        raise DegenerateBaselineError(
            f"x-offset split {split:.4f} px is below "
            f"{MIN_BASELINE_SPLIT_PX} px; depth unobservable"
        )
    if split < 0:
        raise DegenerateBaselineError(
            "reference points appear mirrored (A left of B); check A/B labels"
        )
    return l_cm * pxa / split, l_cm * py / split, l_cm * cam.focal_px / split


def estimate_azimuth(a_px: ImagePointF, b_px: ImagePointF) -> float:
    """Device azimuth (degrees, (-180, 180]) from the header baseline image."""
    if a_px == b_px:
        raise CoincidentPointsError("reference projections coincide")
    psi = math.degrees(math.atan2(b_px.py - a_px.py, a_px.px - b_px.px))
    return normalize_angle_deg(psi)


def derotate(
    a_px: ImagePointF, b_px: ImagePointF, cam: CameraParams
) -> AzimuthSolution:
    """Rotate the observed pair about H so the baseline is horizontal.

    B is swung by +psi around the principal point; A is then placed at
    distance |A'B'| to B's right, which forces the two output points onto
    the same py exactly.
    """
    psi_deg = estimate_azimuth(a_px, b_px)
    psi = math.radians(psi_deg)
    hx, hy = cam.principal_point
    r1 = math.hypot(b_px.px - hx, b_px.py - hy)
    omega = math.atan2(b_px.py - hy, b_px.px - hx)
    b_pp = ImagePointF(
        hx + r1 * math.cos(psi + omega), hy + r1 * math.sin(psi + omega)
    )
    r2 = math.hypot(a_px.px - b_px.px, a_px.py - b_px.py)
    a_pp = ImagePointF(b_pp.px + r2, b_pp.py)
    return AzimuthSolution(
        psi_deg=psi_deg,
        omega_deg=math.degrees(omega),
        r1_px=r1,
        r2_px=r2,
        a_pp=a_pp,
        b_pp=b_pp,
    )


def tilt_compensate(
    p: ImagePointF, roll_deg: float, pitch_deg: float, cam: CameraParams
) -> ImagePointF:
    """Map an observed point onto the virtual zero-tilt plane.

    Each axis is converted to a view angle, shifted by the measured tilt,
    and re-projected through tan; the result may land far outside the
    physical sensor.
    """
    f = cam.focal_px
    hx, hy = cam.principal_point
    alpha = math.atan((p.py - hy) / f) + math.radians(pitch_deg)
    beta = math.atan((p.px - hx) / f) + math.radians(roll_deg)
    half_pi = math.pi / 2.0
    if abs(alpha) >= half_pi or abs(beta) >= half_pi:
        raise TangentSingularityError(
            "compensated view angle reached 90 degrees"
        )
    return ImagePointF(f * math.tan(beta) + hx, f * math.tan(alpha) + hy)


def locate(
    obs: ReferenceObservation,
    cam: CameraParams,
    z_hint: float | None = None,
) -> PositionFix:
    """Full pipeline: attitude, tilt compensation, derotation, position.

    With ``z_hint`` the 2-D solver runs on the midpoint of the aligned
    pair at the hinted height; otherwise the 3-D solver recovers depth
    from the baseline. The fix is the device position relative to LED A's
    ground projection, with the estimated azimuth attached.
    """
    roll_deg, pitch_deg = attitude_from_accel(obs.accel)
    a_virt = tilt_compensate(obs.a_px, roll_deg, pitch_deg, cam)
    b_virt = tilt_compensate(obs.b_px, roll_deg, pitch_deg, cam)
    sol = derotate(a_virt, b_virt, cam)
    if z_hint is None:
        x_a, y_a, z = locate_3d(sol.a_pp, sol.b_pp, obs.baseline_l_cm, cam)
        return PositionFix(-x_a, -y_a, z, sol.psi_deg, FixFrame.CELL_LOCAL)
    if z_hint <= 0:
        raise ValueError("z_hint must be positive")
    mid = ImagePointF((sol.a_pp.px + sol.b_pp.px) / 2.0, sol.a_pp.py)
    x_m, y_m = locate_2d(mid, z_hint, cam)
    # The midpoint sits half a baseline to A's left; shift back to A.
    x_a = x_m + obs.baseline_l_cm / 2.0
    return PositionFix(-x_a, -y_m, z_hint, sol.psi_deg, FixFrame.CELL_LOCAL)
