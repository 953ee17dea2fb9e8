"""Indoor positioning from color-coded LED ceiling landmarks.

A landmark is a small grid of red/green/blue LEDs whose color pattern
identifies a positioning cell and whose all-red header row fixes an
absolute direction. A device looking up at it with a calibrated camera
recovers its own position from the projected geometry: tilt measured by
the accelerometer is compensated onto a virtual zero-tilt plane, the
header baseline yields the azimuth, and similar triangles give the 2-D
or 3-D position in centimeters.
"""

from .camera import (
    AccelSample,
    Attitude,
    CameraParams,
    DevicePose,
    ImagePointF,
    PixelPoint,
    WorldPoint,
    attitude_from_accel,
    accel_for_attitude,
    default_camera,
    normalize_angle_deg,
    project_rotation_model,
    project_tangent_model,
    quantize,
    required_tilt_for_radius,
)
from .calibration import CalibrationScene, calibrate, calibrate_repeated
from .codebook import (
    CodebookEntry,
    ColorCode,
    codebook_entries,
    count_identifiers,
    decode_orientation,
    enumerate_identifiers,
    is_valid_identifier,
    mirror_code,
    rotate_code,
)
from .detect import Blob, Frame, blobs_to_code, extract_blobs, read_ppm, render_frame, write_ppm
from .errors import LedlocError
from .harness import (
    ErrorReport,
    ModelGapConfig,
    NoiseSpec,
    ScenarioConfig,
    SweepSpec,
    ZERO_NOISE,
    model_gap_report,
    run_scenario,
    synthesize_observation,
)
from .localize import (
    AzimuthSolution,
    FixFrame,
    PositionFix,
    ReferenceObservation,
    derotate,
    estimate_azimuth,
    locate,
    locate_2d,
    locate_3d,
    tilt_compensate,
)
from .registry import (
    Landmark,
    LandmarkRegistry,
    load_registry,
    lookup,
    save_registry,
    to_world,
)

__version__ = "0.1.0"

__all__ = [
    "AccelSample",
    "Attitude",
    "AzimuthSolution",
    "Blob",
    "CalibrationScene",
    "CameraParams",
    "CodebookEntry",
    "ColorCode",
    "DevicePose",
    "ErrorReport",
    "FixFrame",
    "Frame",
    "ImagePointF",
    "Landmark",
    "LandmarkRegistry",
    "LedlocError",
    "ModelGapConfig",
    "NoiseSpec",
    "PixelPoint",
    "PositionFix",
    "ReferenceObservation",
    "ScenarioConfig",
    "SweepSpec",
    "WorldPoint",
    "ZERO_NOISE",
    "accel_for_attitude",
    "attitude_from_accel",
    "blobs_to_code",
    "calibrate",
    "calibrate_repeated",
    "codebook_entries",
    "count_identifiers",
    "decode_orientation",
    "default_camera",
    "derotate",
    "enumerate_identifiers",
    "estimate_azimuth",
    "extract_blobs",
    "is_valid_identifier",
    "load_registry",
    "locate",
    "locate_2d",
    "locate_3d",
    "lookup",
    "mirror_code",
    "model_gap_report",
    "normalize_angle_deg",
    "project_rotation_model",
    "project_tangent_model",
    "quantize",
    "read_ppm",
    "render_frame",
    "required_tilt_for_radius",
    "rotate_code",
    "run_scenario",
    "save_registry",
    "synthesize_observation",
    "tilt_compensate",
    "to_world",
    "write_ppm",
]
