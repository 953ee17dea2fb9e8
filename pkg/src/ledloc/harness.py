"""Experiment driver: noise models, parameter sweeps, error statistics, CSV.

Observations are synthesized analytically (no rasterization): the chosen
forward projector produces the two reference projections, noise is
applied, and the localization pipeline runs in reverse. The position
error is the Euclidean distance between the true device position and the
fix; azimuth error is the wrapped absolute difference.

Determinism: every trial draws from ``numpy.random.Generator(PCG64)``
seeded via ``SeedSequence(seed, spawn_key=(point_index, trial_index))``,
so results are independent of execution order and reproducible across
platforms and process counts. Identical config + seed therefore yields a
byte-identical CSV.
"""

from __future__ import annotations

import io
import math
from dataclasses import dataclass, field

import numpy as np

from .camera import (
    Attitude,
    CameraParams,
    DevicePose,
    GRAVITY_MPS2,
    ImagePointF,
    WorldPoint,
    default_camera,
    normalize_angle_deg,
    project_rotation_model,
    project_tangent_model,
    quantize,
)
from .errors import ConfigError, LedlocError
from .localize import ReferenceObservation, locate
from .camera import AccelSample

SWEEP_AXES = ("x", "y", "z", "azimuth", "roll", "pitch", "radius")
CSV_HEADER = "sweep_value,mean_err_cm,max_err_cm,azimuth_err_deg,failures"


@dataclass(frozen=True)
class NoiseSpec:
    """Sensor noise model; deterministic for a fixed seed.

    quantize:      snap observations to the pixel grid
    pixel_sigma:   Gaussian jitter on each centroid coordinate, px
    accel_sigma:   Gaussian noise on each accelerometer axis, m/s^2
    channel_sigma: Gaussian noise on rendered channel values (frames only)
    """

    quantize: bool = True
    pixel_sigma: float = 0.3
    accel_sigma: float = 0.05
    channel_sigma: float = 0.0
    seed: int = 0

    def __post_init__(self):
        if self.pixel_sigma < 0 or self.accel_sigma < 0 or self.channel_sigma < 0:
            raise ValueError("noise sigmas cannot be negative")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must fit an unsigned 64-bit integer")


ZERO_NOISE = NoiseSpec(
    quantize=False, pixel_sigma=0.0, accel_sigma=0.0, channel_sigma=0.0, seed=0
)


@dataclass(frozen=True)
class SweepSpec:
    axis: str
    start: float
    stop: float
    step: float

    def __post_init__(self):
        if self.axis not in SWEEP_AXES:
            raise ConfigError(f"unknown sweep axis {self.axis!r}; one of {SWEEP_AXES}")
        if self.step <= 0 and self.stop != self.start:
            raise ConfigError("sweep step must be positive")

    def values(self) -> list[float]:
        if self.stop == self.start:
            return [self.start]
        if self.stop < self.start:
            raise ConfigError("sweep stop must not precede start")
        count = int(math.floor((self.stop - self.start) / self.step + 1e-9)) + 1
        return [self.start + i * self.step for i in range(count)]


@dataclass(frozen=True)
class ScenarioConfig:
    """One experiment: a swept pose axis, trials per point, and noise.

    ``pose`` holds the fixed pose parameters; the sweep overrides one
    axis ("radius" places the device on a circle of that radius at a
    random bearing per trial). ``tilt_jitter_deg`` adds Gaussian
    hand-shake to roll and pitch; ``position_jitter_cm`` scatters x and y
    uniformly. ``projection`` selects the forward model: "tangent" (the
    algorithm's own geometry; noiseless sweeps are exact) or "rotation"
    (rigorous rigid-body model, exposing the per-axis approximation).
    """

    sweep: SweepSpec
    pose: DevicePose = DevicePose(x_cm=0.0, y_cm=0.0, z_cm=220.0)
    trials: int = 100
    mode: str = "3d"
    projection: str = "tangent"
    baseline_l_cm: float = 10.0
    tilt_jitter_deg: float = 0.0
    position_jitter_cm: float = 0.0
    camera: CameraParams = field(default_factory=default_camera)
    noise: NoiseSpec = NoiseSpec()

    def __post_init__(self):
        if self.trials < 1:
            raise ConfigError("trials must be >= 1")
        if self.mode not in ("2d", "3d"):
            raise ConfigError("mode must be '2d' or '3d'")
        if self.projection not in ("tangent", "rotation"):
            raise ConfigError("projection must be 'tangent' or 'rotation'")
        if self.baseline_l_cm <= 0:
            raise ConfigError("baseline_l_cm must be positive")
        if self.tilt_jitter_deg < 0 or self.position_jitter_cm < 0:
            raise ConfigError("jitter magnitudes cannot be negative")


@dataclass(frozen=True)
class PointStats:
    sweep_value: float
    mean_err_cm: float
    max_err_cm: float
    azimuth_err_deg: float
    failures: int


@dataclass(frozen=True)
class ErrorReport:
    points: tuple[PointStats, ...]

    @property
    def overall_mean_err_cm(self) -> float:
        means = [p.mean_err_cm for p in self.points if not math.isnan(p.mean_err_cm)]
        return sum(means) / len(means) if means else float("nan")

    @property
    def total_failures(self) -> int:
        return sum(p.failures for p in self.points)

    def to_csv(self) -> str:
        out = io.StringIO()
        out.write(CSV_HEADER + "\n")
        for p in self.points:
            out.write(
                f"{p.sweep_value:.6g},{p.mean_err_cm:.6g},{p.max_err_cm:.6g},"
                f"{p.azimuth_err_deg:.6g},{p.failures}\n"
            )
        return out.getvalue()


def _trial_rng(seed: int, point_index: int, trial_index: int) -> np.random.Generator:
    seq = np.random.SeedSequence(seed, spawn_key=(point_index, trial_index))
    return np.random.Generator(np.random.PCG64(seq))


def _pose_for_trial(
    cfg: ScenarioConfig, value: float, rng: np.random.Generator
) -> DevicePose:
    x, y, z = cfg.pose.x_cm, cfg.pose.y_cm, cfg.pose.z_cm
    att = cfg.pose.attitude
    roll, pitch, azimuth = att.roll_deg, att.pitch_deg, att.azimuth_deg
    axis = cfg.sweep.axis
    if axis == "x":
        x = value
    elif axis == "y":
        y = value
    elif axis == "z":
        z = value
    elif axis == "azimuth":
        azimuth = value
    elif axis == "roll":
        roll = value
    elif axis == "pitch":
        pitch = value
    elif axis == "radius":
        bearing = rng.uniform(0.0, 2.0 * math.pi)
        x = value * math.cos(bearing)
        y = value * math.sin(bearing)
    if cfg.position_jitter_cm > 0:
        x += rng.uniform(-cfg.position_jitter_cm, cfg.position_jitter_cm)
        y += rng.uniform(-cfg.position_jitter_cm, cfg.position_jitter_cm)
    if cfg.tilt_jitter_deg > 0:
        roll += rng.normal(0.0, cfg.tilt_jitter_deg)
        pitch += rng.normal(0.0, cfg.tilt_jitter_deg)
    return DevicePose(
        x_cm=x,
        y_cm=y,
        z_cm=z,
        attitude=Attitude(roll_deg=roll, pitch_deg=pitch, azimuth_deg=azimuth),
    )


def synthesize_observation(
    pose: DevicePose,
    cam: CameraParams,
    baseline_l_cm: float,
    noise: NoiseSpec,
    rng: np.random.Generator,
    projection: str = "tangent",
) -> ReferenceObservation:
    """Forward-project the header endpoints from a pose and apply noise.

    Reference LED A sits at the cell origin, B one baseline to its -x;
    the accelerometer reading is the resting-device value for the pose's
    tilt plus Gaussian noise.
    """
    project = (
        project_tangent_model if projection == "tangent" else project_rotation_model
    )
    a_world = WorldPoint(-pose.x_cm, -pose.y_cm, pose.z_cm)
    b_world = WorldPoint(-baseline_l_cm - pose.x_cm, -pose.y_cm, pose.z_cm)
    points = []
    for world in (a_world, b_world):
        p = project(world, pose.attitude, cam)
        px, py = p.px, p.py
        if noise.pixel_sigma > 0:
            px += rng.normal(0.0, noise.pixel_sigma)
            py += rng.normal(0.0, noise.pixel_sigma)
        if noise.quantize:
            q = quantize(ImagePointF(px, py), cam)
            px, py = float(q.px), float(q.py)
        points.append(ImagePointF(px, py))
    att = pose.attitude
    ax = GRAVITY_MPS2 * math.sin(math.radians(att.pitch_deg))
    ay = GRAVITY_MPS2 * math.sin(math.radians(att.roll_deg))
    if noise.accel_sigma > 0:
        ax += rng.normal(0.0, noise.accel_sigma)
        ay += rng.normal(0.0, noise.accel_sigma)
    return ReferenceObservation(
        a_px=points[0],
        b_px=points[1],
        baseline_l_cm=baseline_l_cm,
        accel=AccelSample(ax_mps2=ax, ay_mps2=ay),
    )


def run_point(
    cfg: ScenarioConfig, point_index: int, value: float
) -> tuple[list[float], list[float], int]:
    """All trials of one sweep point: (position errors, azimuth errors, failures)."""
    errors: list[float] = []
    azimuth_errors: list[float] = []
    failures = 0
    for trial in range(cfg.trials):
        rng = _trial_rng(cfg.noise.seed, point_index, trial)
        pose = _pose_for_trial(cfg, value, rng)
        try:
            obs = synthesize_observation(
                pose, cfg.camera, cfg.baseline_l_cm, cfg.noise, rng, cfg.projection
            )
            z_hint = pose.z_cm if cfg.mode == "2d" else None
            fix = locate(obs, cfg.camera, z_hint=z_hint)
        except LedlocError:
            failures += 1
            continue
        dx = fix.x_cm - pose.x_cm
        dy = fix.y_cm - pose.y_cm
        if cfg.mode == "2d":
            errors.append(math.hypot(dx, dy))
        else:
            errors.append(math.sqrt(dx * dx + dy * dy + (fix.z_cm - pose.z_cm) ** 2))
        azimuth_errors.append(
            abs(normalize_angle_deg(fix.azimuth_deg - pose.attitude.azimuth_deg))
        )
    return errors, azimuth_errors, failures


def run_scenario(cfg: ScenarioConfig) -> ErrorReport:
    """Execute every sweep point; per-trial failures are counted, not fatal."""
    points = []
    for pi, value in enumerate(cfg.sweep.values()):
        errors, azimuth_errors, failures = run_point(cfg, pi, value)
        if errors:
            mean_err = sum(errors) / len(errors)
            max_err = max(errors)
            az_err = sum(azimuth_errors) / len(azimuth_errors)
        else:
            mean_err = max_err = az_err = float("nan")
        points.append(
            PointStats(
                sweep_value=value,
                mean_err_cm=mean_err,
                max_err_cm=max_err,
                azimuth_err_deg=az_err,
                failures=failures,
            )
        )
    return ErrorReport(points=tuple(points))


@dataclass(frozen=True)
class ModelGapConfig:
    """Grid of tilt values over which the two projectors are compared."""

    tilt_max_deg: float = 35.0
    tilt_step_deg: float = 5.0
    offset_x_cm: float = 100.0
    offset_y_cm: float = 40.0
    z_cm: float = 220.0
    azimuth_deg: float = 0.0
    baseline_l_cm: float = 10.0
    camera: CameraParams = field(default_factory=default_camera)

    def __post_init__(self):
        if self.tilt_step_deg <= 0 or self.tilt_max_deg < 0:
            raise ConfigError("tilt grid must have positive step and extent")
        if self.z_cm <= 0:
            raise ConfigError("z_cm must be positive")


MODEL_GAP_HEADER = "roll_deg,pitch_deg,px_gap,cm_err"


def model_gap_report(cfg: ModelGapConfig = ModelGapConfig()) -> str:
    """CSV quantifying the per-axis tangent approximation per tilt pair.

    ``px_gap`` is the pixel distance between the two projectors' images
    of the reference point; ``cm_err`` is the position error of the
    inverse pipeline when the world follows the rigorous rotation model.
    """
    steps = int(math.floor(cfg.tilt_max_deg / cfg.tilt_step_deg + 1e-9)) + 1
    tilts = [i * cfg.tilt_step_deg for i in range(steps)]
    pose_xy = (cfg.offset_x_cm, cfg.offset_y_cm)
    a_world = WorldPoint(-pose_xy[0], -pose_xy[1], cfg.z_cm)
    b_world = WorldPoint(-cfg.baseline_l_cm - pose_xy[0], -pose_xy[1], cfg.z_cm)
    out = io.StringIO()
    out.write(MODEL_GAP_HEADER + "\n")
    for roll in tilts:
        for pitch in tilts:
            att = Attitude(roll_deg=roll, pitch_deg=pitch, azimuth_deg=cfg.azimuth_deg)
            try:
                tangent = project_tangent_model(a_world, att, cfg.camera)
                rigorous = project_rotation_model(a_world, att, cfg.camera)
                px_gap = math.hypot(
                    tangent.px - rigorous.px, tangent.py - rigorous.py
                )
                obs = ReferenceObservation(
                    a_px=rigorous,
                    b_px=project_rotation_model(b_world, att, cfg.camera),
                    baseline_l_cm=cfg.baseline_l_cm,
                    accel=AccelSample(
                        ax_mps2=GRAVITY_MPS2 * math.sin(math.radians(pitch)),
                        ay_mps2=GRAVITY_MPS2 * math.sin(math.radians(roll)),
                    ),
                )
                fix = locate(obs, cfg.camera)
                cm_err = math.sqrt(
                    (fix.x_cm - pose_xy[0]) ** 2
                    + (fix.y_cm - pose_xy[1]) ** 2
                    + (fix.z_cm - cfg.z_cm) ** 2
                )
                out.write(f"{roll:.6g},{pitch:.6g},{px_gap:.6g},{cm_err:.6g}\n")
            except LedlocError:
                out.write(f"{roll:.6g},{pitch:.6g},nan,nan\n")
    return out.getvalue()


def scenario_from_document(doc: dict) -> ScenarioConfig:
    """Build a ScenarioConfig from a parsed scenario JSON document."""
    if not isinstance(doc, dict):
        raise ConfigError("scenario document must be a JSON object")
    try:
        sweep_doc = doc["sweep"]
        sweep = SweepSpec(
            axis=str(sweep_doc["axis"]),
            start=float(sweep_doc["start"]),
            stop=float(sweep_doc["stop"]),
            step=float(sweep_doc.get("step", 1.0)),
        )
        pose_doc = doc.get("pose", {})
        pose = DevicePose(
            x_cm=float(pose_doc.get("x_cm", 0.0)),
            y_cm=float(pose_doc.get("y_cm", 0.0)),
            z_cm=float(pose_doc.get("z_cm", 220.0)),
            attitude=Attitude(
                roll_deg=float(pose_doc.get("roll_deg", 0.0)),
                pitch_deg=float(pose_doc.get("pitch_deg", 0.0)),
                azimuth_deg=float(pose_doc.get("azimuth_deg", 0.0)),
            ),
        )
        noise_doc = doc.get("noise", {})
        noise = NoiseSpec(
            quantize=bool(noise_doc.get("quantize", True)),
            pixel_sigma=float(noise_doc.get("pixel_sigma", 0.3)),
            accel_sigma=float(noise_doc.get("accel_sigma", 0.05)),
            channel_sigma=float(noise_doc.get("channel_sigma", 0.0)),
            seed=int(noise_doc.get("seed", 0)),
        )
        cam = camera_from_document(doc.get("camera"))
        return ScenarioConfig(
            sweep=sweep,
            pose=pose,
            trials=int(doc.get("trials", 100)),
            mode=str(doc.get("mode", "3d")),
            projection=str(doc.get("projection", "tangent")),
            baseline_l_cm=float(doc.get("baseline_l_cm", 10.0)),
            tilt_jitter_deg=float(doc.get("tilt_jitter_deg", 0.0)),
            position_jitter_cm=float(doc.get("position_jitter_cm", 0.0)),
            camera=cam,
            noise=noise,
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise ConfigError(f"malformed scenario document: {exc}") from exc


def camera_from_document(doc: dict | None) -> CameraParams:
    """Camera from a JSON fragment; None or {} yields the default camera."""
    if not doc:
        return default_camera()
    try:
        principal = doc.get("principal_point")
        return CameraParams(
            u_cm_per_px=float(doc["u_cm_per_px"]),
            zc_cm=float(doc["zc_cm"]),
            width_px=int(doc.get("width_px", 640)),
            height_px=int(doc.get("height_px", 480)),
            principal_point=tuple(map(float, principal)) if principal else None,
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise ConfigError(f"malformed camera document: {exc}") from exc
