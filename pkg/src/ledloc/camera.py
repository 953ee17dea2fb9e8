"""Camera intrinsics, device attitude, and the forward projection models.

COORDINATE CONVENTIONS
======================
Room frame (per positioning cell):
  - x, y: horizontal, centimeters. x runs along the landmark's header
    baseline (from the left reference LED B toward the right one A).
  - z: vertical distance from the camera up to the luminary plane,
    centimeters, always positive for a visible LED.

Image frame:
  - Origin at the sensor corner, px to the right, py downward in reading
    order, units of pixels. The principal point H sits at the geometric
    sensor center unless overridden.
  - At zero attitude, px grows with room +x and py with room +y.

Attitude:
  - azimuth (yaw) about the vertical axis, pitch about the camera x axis,
    roll about the camera y axis. Roll and pitch together are "tilt".
  - Degrees at every API boundary; radians only inside function bodies.

Two forward projectors are provided. ``project_tangent_model`` composes
zero-attitude pinhole projection, an azimuth rotation about H, and a
per-axis tangent tilt map; it is the exact inverse of the localization
chain (tilt compensation -> derotation -> pinhole inversion), so
noiseless round trips are identities by construction.
``project_rotation_model`` applies the full rigid rotation matrix before
central projection and serves as the rigorous reference: the two agree
exactly whenever roll = pitch = 0, and the gap between them measures the
per-axis tangent approximation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import (
    BehindCameraError,
    OutOfRangeError,
    UnprojectableError,
    UnreachableError,
)

GRAVITY_MPS2 = 9.8

# Field-of-view anchor used by the default experiment camera: a target at
# 275 cm horizontal radius and 220 cm height must need exactly 35 degrees
# of tilt to enter the frame.
FOV_ANCHOR_RADIUS_CM = 275.0
FOV_ANCHOR_Z_CM = 220.0
FOV_ANCHOR_TILT_DEG = 35.0


def normalize_angle_deg(angle_deg: float) -> float:
    """Wrap an angle into (-180, 180]."""
    a = math.fmod(angle_deg, 360.0)
    if a <= -180.0:
        a += 360.0
    elif a > 180.0:
        a -= 360.0
    return a


@dataclass(frozen=True)
class CameraParams:
    """Pinhole intrinsics: conversion constant, focal distance, sensor size.

    ``u_cm_per_px`` converts image-plane pixels to centimeters;
    ``zc_cm`` is the lens-to-image-plane distance. Only their ratio
    ``focal_px = zc_cm / u_cm_per_px`` enters the projection geometry.
    """

    u_cm_per_px: float
    zc_cm: float
    width_px: int = 640
    height_px: int = 480
    principal_point: tuple[float, float] | None = None

    def __post_init__(self):
        if self.u_cm_per_px <= 0 or self.zc_cm <= 0:
            raise ValueError("u_cm_per_px and zc_cm must be positive")
        if self.width_px <= 0 or self.height_px <= 0:
            raise ValueError("sensor dimensions must be positive")
        if self.principal_point is None:
            object.__setattr__(
                self, "principal_point", (self.width_px / 2.0, self.height_px / 2.0)
            )
        hx, hy = self.principal_point
        if not (0.0 <= hx <= self.width_px and 0.0 <= hy <= self.height_px):
            raise ValueError("principal point must lie inside the sensor")

    @property
    def focal_px(self) -> float:
        """Pixels of image displacement per unit tangent of the view angle."""
        return self.zc_cm / self.u_cm_per_px


@dataclass(frozen=True)
class Attitude:
    """Device inclination: roll, pitch (tilt) and azimuth, degrees."""

    roll_deg: float = 0.0
    pitch_deg: float = 0.0
    azimuth_deg: float = 0.0

    def __post_init__(self):
        if abs(self.roll_deg) >= 90.0 or abs(self.pitch_deg) >= 90.0:
            raise ValueError("roll and pitch must stay within (-90, 90) degrees")
        object.__setattr__(
            self, "azimuth_deg", normalize_angle_deg(self.azimuth_deg)
        )


@dataclass(frozen=True)
class AccelSample:
    """Accelerometer reading along the device x and y axes, m/s^2."""

    ax_mps2: float = 0.0
    ay_mps2: float = 0.0


@dataclass(frozen=True)
class WorldPoint:
    """Point in the room frame, centimeters; z is height above the camera."""

    x_cm: float
    y_cm: float
    z_cm: float


@dataclass(frozen=True)
class ImagePointF:
    """Continuous image-plane point, pixels, origin at the sensor corner."""

    px: float
    py: float


@dataclass(frozen=True)
class PixelPoint:
    """Quantized sensor pixel with an in-frame flag (bounds are exclusive)."""

    px: int
    py: int
    in_frame: bool


@dataclass(frozen=True)
class DevicePose:
    """Camera position in a cell's frame plus its attitude.

    x/y are measured from the reference LED A's ground projection; z is
    the vertical distance up to the luminary plane.
    """

    x_cm: float = 0.0
    y_cm: float = 0.0
    z_cm: float = 220.0
    attitude: Attitude = Attitude()

    def __post_init__(self):
        if self.z_cm <= 0:
            raise ValueError("z_cm must be positive")


def default_camera(
    width_px: int = 640,
    height_px: int = 480,
    u_cm_per_px: float = 0.0006,
) -> CameraParams:
    """Experiment camera whose FOV is anchored to the tilt-extension curve.

    The focal distance is solved so that ``required_tilt_for_radius``
    returns exactly 35 degrees for a target at 275 cm radius and 220 cm
    height, i.e. the half field of view along the pitch axis equals
    atan(275/220) - 35 deg.
    """
    gamma = math.atan2(FOV_ANCHOR_RADIUS_CM, FOV_ANCHOR_Z_CM) - math.radians(
        FOV_ANCHOR_TILT_DEG
    )
    focal_px = (height_px / 2.0) / math.tan(gamma)
    return CameraParams(
        u_cm_per_px=u_cm_per_px,
        zc_cm=u_cm_per_px * focal_px,
        width_px=width_px,
        height_px=height_px,
    )


def attitude_from_accel(sample: AccelSample) -> tuple[float, float]:
    """Convert accelerometer readings to (roll_deg, pitch_deg).

    Roll is asin(ay/9.8) and pitch asin(ax/9.8); readings beyond gravity
    mean the device is accelerating and the attitude is unresolvable.
    """
    if abs(sample.ax_mps2) > GRAVITY_MPS2 or abs(sample.ay_mps2) > GRAVITY_MPS2:
        raise OutOfRangeError(
            f"accelerometer reading exceeds gravity: "
            f"({sample.ax_mps2}, {sample.ay_mps2}) m/s^2"
        )
    roll = math.degrees(math.asin(sample.ay_mps2 / GRAVITY_MPS2))
    pitch = math.degrees(math.asin(sample.ax_mps2 / GRAVITY_MPS2))
    return roll, pitch


def accel_for_attitude(roll_deg: float, pitch_deg: float) -> AccelSample:
    """Accelerometer reading a resting device reports at the given tilt."""
    return AccelSample(
        ax_mps2=GRAVITY_MPS2 * math.sin(math.radians(pitch_deg)),
        ay_mps2=GRAVITY_MPS2 * math.sin(math.radians(roll_deg)),
    )


def project_tangent_model(
    point: WorldPoint, att: Attitude, cam: CameraParams
) -> ImagePointF:
    """Forward-project a world point with the per-axis tangent tilt model.

    Three stages, each the inverse of one localization step:
      (a) zero-attitude pinhole:  q = (x/z, y/z) * focal_px + H
      (b) device azimuth: rotate q about H by -azimuth
      (c) tilt: per axis, convert to a view angle, subtract pitch (y) or
          roll (x), re-project through tan.
    """
    if point.z_cm <= 0:
        raise UnprojectableError("point must be above the camera (z_cm > 0)")
    f = cam.focal_px
    hx, hy = cam.principal_point
    # (a) zero-attitude projection
    qx = point.x_cm / point.z_cm * f
    qy = point.y_cm / point.z_cm * f
    # (b) azimuth: image content rotates opposite to the device yaw
    psi = math.radians(att.azimuth_deg)
    c, s = math.cos(psi), math.sin(psi)
    rx = qx * c + qy * s
    ry = -qx * s + qy * c
    # (c) per-axis tangent tilt map
    beta = math.atan(rx / f) - math.radians(att.roll_deg)
    alpha = math.atan(ry / f) - math.radians(att.pitch_deg)
    half_pi = math.pi / 2.0
    if abs(alpha) >= half_pi or abs(beta) >= half_pi:
        raise UnprojectableError(
            "tilted view angle reached 90 degrees; point leaves the tangent map"
        )
    return ImagePointF(f * math.tan(beta) + hx, f * math.tan(alpha) + hy)


def _world_to_camera_matrix(att: Attitude) -> list[list[float]]:
    # Composition order: yaw, then pitch (about x), then roll (about y),
    # as intrinsic camera rotations; returned matrix maps room vectors
    # into the camera frame.
    cps, sps = math.cos(math.radians(att.azimuth_deg)), math.sin(
        math.radians(att.azimuth_deg)
    )
    cth, sth = math.cos(math.radians(att.pitch_deg)), math.sin(
        math.radians(att.pitch_deg)
    )
    cph, sph = math.cos(math.radians(att.roll_deg)), math.sin(
        math.radians(att.roll_deg)
    )
    yaw = [[cps, sps, 0.0], [-sps, cps, 0.0], [0.0, 0.0, 1.0]]
    pitch = [[1.0, 0.0, 0.0], [0.0, cth, -sth], [0.0, sth, cth]]
    roll = [[cph, 0.0, -sph], [0.0, 1.0, 0.0], [sph, 0.0, cph]]

    def matmul(a, b):
        return [
            [sum(a[i][k] * b[k][j] for k in range(3)) for j in range(3)]
            for i in range(3)
        ]

    return matmul(roll, matmul(pitch, yaw))


def project_rotation_model(
    point: WorldPoint, att: Attitude, cam: CameraParams
) -> ImagePointF:
    """Forward-project through the full rotation matrix (rigorous model)."""
    w2c = _world_to_camera_matrix(att)
    d = (point.x_cm, point.y_cm, point.z_cm)
    vx = sum(w2c[0][k] * d[k] for k in range(3))
    vy = sum(w2c[1][k] * d[k] for k in range(3))
    vz = sum(w2c[2][k] * d[k] for k in range(3))
    if vz <= 0:
        raise BehindCameraError("point lies behind the rotated image plane")
    f = cam.focal_px
    hx, hy = cam.principal_point
    return ImagePointF(f * vx / vz + hx, f * vy / vz + hy)


def _round_half_away(v: float) -> int:
    if v >= 0:
        return int(math.floor(v + 0.5))
    return int(math.ceil(v - 0.5))


def quantize(p: ImagePointF, cam: CameraParams) -> PixelPoint:
    """Quantize to the sensor grid, rounding half away from zero.

    Out-of-frame results are flagged, not rejected; sensor bounds are
    exclusive on the high side, so (width, height) itself is outside.
    """
    ix = _round_half_away(p.px)
    iy = _round_half_away(p.py)
    in_frame = 0 <= ix < cam.width_px and 0 <= iy < cam.height_px
    return PixelPoint(ix, iy, in_frame)


def required_tilt_for_radius(r_cm: float, z_cm: float, cam: CameraParams) -> float:
    """Smallest tilt (degrees) that brings a target at radius r into frame.

    The tilt is applied about the axis perpendicular to the target
    bearing, i.e. the camera is pitched straight toward the target, so
    the binding constraint is the half field of view along the pitch
    axis. Returns 0 when the target is already inside the native FOV.
    """
    if r_cm < 0:
        raise ValueError("radius must be non-negative")
    if z_cm <= 0:
        raise ValueError("height must be positive")
    hx, hy = cam.principal_point
    half_extent_px = min(hy, cam.height_px - hy)
    gamma = math.atan(half_extent_px / cam.focal_px)
    tilt = math.degrees(math.atan2(r_cm, z_cm) - gamma)
    if tilt <= 0:
        return 0.0
    if tilt >= 90.0:
        raise UnreachableError(
            f"no tilt below 90 degrees reaches radius {r_cm} cm at z={z_cm} cm"
        )
    return tilt
