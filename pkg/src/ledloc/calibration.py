"""One-time recovery of the camera constants U and Zc from a known scene.

The device is held at a known height z below two ceiling LEDs with known
lateral offsets; two pixel distances measured in the captured image then
determine both constants through similar triangles:

    U  = (X2*x1 - X1*x2) / x2^2
    Zc = z * (X2*x1 - X1*x2) / (X2*x2)
"""

from __future__ import annotations

from dataclasses import dataclass
from statistics import median

from .camera import CameraParams
from .errors import DegenerateSceneError


@dataclass(frozen=True)
class CalibrationScene:
    """Known geometry (cm) and measured pixel distances of one calibration shot."""

    z_cm: float
    x1_off_cm: float
    x2_off_cm: float
    x1_px: float
    x2_px: float

    def __post_init__(self):
        if self.z_cm <= 0:
            raise ValueError("z_cm must be positive")
        if self.x1_px < 0 or self.x2_px < 0:
            raise ValueError("pixel distances cannot be negative")


def calibrate(
    scene: CalibrationScene,
    width_px: int = 640,
    height_px: int = 480,
) -> CameraParams:
    """Recover (U, Zc) from a single scene; sensor size is passed through."""
    if scene.x2_px == 0:
        raise DegenerateSceneError("x2_px is zero; scene carries no scale")
    numerator = scene.x2_off_cm * scene.x1_px - scene.x1_off_cm * scene.x2_px
    if numerator <= 0 or scene.x2_off_cm <= 0:
        raise DegenerateSceneError(
            "scene geometry yields a non-positive conversion constant"
        )
    u = numerator / (scene.x2_px * scene.x2_px)
    zc = scene.z_cm * numerator / (scene.x2_off_cm * scene.x2_px)
    return CameraParams(
        u_cm_per_px=u, zc_cm=zc, width_px=width_px, height_px=height_px
    )


def calibrate_repeated(
    scenes: list[CalibrationScene],
    width_px: int = 640,
    height_px: int = 480,
) -> CameraParams:
    """Median of per-scene calibrations; a single scene reduces to calibrate()."""
    if not scenes:
        raise ValueError("at least one scene is required")
    results = [calibrate(s, width_px, height_px) for s in scenes]
    return CameraParams(
        u_cm_per_px=median(r.u_cm_per_px for r in results),
        zc_cm=median(r.zc_cm for r in results),
        width_px=width_px,
        height_px=height_px,
    )
