"""Projection models, attitude conversion, quantization, FOV extension.

Expected values are hand-computed from the similar-triangle geometry,
e.g. a point at (40, 20, 200) cm with focal_px = 5/0.01 = 500 projects
at offsets (40/200*500, 20/200*500) = (100, 50) px from the center.
"""

import math

import pytest

from ledloc import (
    AccelSample,
    Attitude,
    CameraParams,
    ImagePointF,
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
from ledloc.errors import (
    BehindCameraError,
    OutOfRangeError,
    UnprojectableError,
)


class TestAttitudeFromAccel:
    def test_level_device(self):
        assert attitude_from_accel(AccelSample(0.0, 0.0)) == (0.0, 0.0)

    def test_half_gravity_is_thirty_degrees(self):
        roll, pitch = attitude_from_accel(AccelSample(0.0, 4.9))
        assert roll == pytest.approx(30.0)
        assert pitch == 0.0

    def test_reading_beyond_gravity_rejected(self):
        with pytest.raises(OutOfRangeError):
            attitude_from_accel(AccelSample(0.0, 10.0))
        with pytest.raises(OutOfRangeError):
            attitude_from_accel(AccelSample(-10.0, 0.0))

    def test_inverse_of_accel_for_attitude(self):
        for roll, pitch in [(12.5, -7.0), (-34.0, 20.0), (0.0, 45.0)]:
            sample = accel_for_attitude(roll, pitch)
            r, p = attitude_from_accel(sample)
            assert r == pytest.approx(roll, abs=1e-12)
            assert p == pytest.approx(pitch, abs=1e-12)


class TestTypes:
    def test_principal_point_defaults_to_center(self, example_cam):
        assert example_cam.principal_point == (320.0, 240.0)

    def test_principal_point_outside_sensor_rejected(self):
        with pytest.raises(ValueError):
            CameraParams(0.01, 5.0, 640, 480, principal_point=(700.0, 100.0))

    def test_nonpositive_intrinsics_rejected(self):
        with pytest.raises(ValueError):
            CameraParams(0.0, 5.0)
        with pytest.raises(ValueError):
            CameraParams(0.01, -1.0)

    def test_attitude_normalizes_azimuth(self):
        assert Attitude(azimuth_deg=270.0).azimuth_deg == -90.0
        assert Attitude(azimuth_deg=-180.0).azimuth_deg == 180.0

    def test_attitude_rejects_vertical_tilt(self):
        with pytest.raises(ValueError):
            Attitude(roll_deg=90.0)

    @pytest.mark.parametrize(
        "raw,expected",
        [(0.0, 0.0), (180.0, 180.0), (-180.0, 180.0), (540.0, 180.0), (-90.0, -90.0)],
    )
    def test_normalize_angle(self, raw, expected):
        assert normalize_angle_deg(raw) == pytest.approx(expected)


class TestTangentProjection:
    def test_nadir_maps_to_principal_point(self, example_cam):
        p = project_tangent_model(WorldPoint(0, 0, 150), Attitude(), example_cam)
        assert (p.px, p.py) == (320.0, 240.0)

    def test_zero_attitude_similar_triangles(self, example_cam):
        p = project_tangent_model(WorldPoint(40, 20, 200), Attitude(), example_cam)
        assert p.px == pytest.approx(420.0)
        assert p.py == pytest.approx(290.0)

    def test_point_below_camera_rejected(self, example_cam):
        with pytest.raises(UnprojectableError):
            project_tangent_model(WorldPoint(0, 0, -10), Attitude(), example_cam)

    def test_tangent_singularity_rejected(self, example_cam):
        # view angle ~63 deg plus 35 deg pitch stays in range; 80+35 does not
        steep = WorldPoint(0, 1000, 100)  # atan(10) = 84.3 deg
        with pytest.raises(UnprojectableError):
            project_tangent_model(steep, Attitude(pitch_deg=-35.0), example_cam)


class TestRotationModel:
    def test_matches_tangent_model_at_zero_tilt(self, cam, rng):
        for _ in range(200):
            p = WorldPoint(
                rng.uniform(-150, 150), rng.uniform(-150, 150), rng.uniform(110, 300)
            )
            att = Attitude(azimuth_deg=rng.uniform(-180, 180))
            t = project_tangent_model(p, att, cam)
            r = project_rotation_model(p, att, cam)
            assert math.hypot(t.px - r.px, t.py - r.py) < 1e-9

    def test_differs_under_combined_tilt(self, cam):
        att = Attitude(roll_deg=20.0, pitch_deg=15.0)
        p = WorldPoint(100, 0, 220)
        t = project_tangent_model(p, att, cam)
        r = project_rotation_model(p, att, cam)
        assert math.hypot(t.px - r.px, t.py - r.py) > 1.0

    def test_on_axis_pure_pitch_is_exact(self, cam):
        # the per-axis map is exact when the other axis offset is zero
        p = WorldPoint(0, 80, 220)
        att = Attitude(pitch_deg=20.0)
        t = project_tangent_model(p, att, cam)
        r = project_rotation_model(p, att, cam)
        assert math.hypot(t.px - r.px, t.py - r.py) < 1e-9

    def test_behind_camera_rejected(self, cam):
        with pytest.raises(BehindCameraError):
            project_rotation_model(WorldPoint(0, 0, -50), Attitude(), cam)


class TestQuantize:
    def test_rounds_half_away_from_zero(self, example_cam):
        q = quantize(ImagePointF(100.4, 200.6), example_cam)
        assert (q.px, q.py, q.in_frame) == (100, 201, True)
        assert quantize(ImagePointF(0.5, 0.5), example_cam).px == 1
        assert quantize(ImagePointF(-0.5, 0.0), example_cam).px == -1

    def test_negative_coordinates_flagged_out_of_frame(self, example_cam):
        q = quantize(ImagePointF(-3.2, 10.0), example_cam)
        assert (q.px, q.py, q.in_frame) == (-3, 10, False)

    def test_high_boundary_is_exclusive(self, example_cam):
        q = quantize(ImagePointF(639.5, 479.5), example_cam)
        assert (q.px, q.py, q.in_frame) == (640, 480, False)

    def test_error_bounded_by_half_pixel(self, example_cam, rng):
        for _ in range(500):
            p = ImagePointF(rng.uniform(-10, 650), rng.uniform(-10, 490))
            q = quantize(p, example_cam)
            assert abs(q.px - p.px) <= 0.5
            assert abs(q.py - p.py) <= 0.5


class TestRequiredTilt:
    def test_nadir_needs_no_tilt(self, cam):
        assert required_tilt_for_radius(0.0, 220.0, cam) == 0.0

    def test_anchor_radius(self, cam):
        assert required_tilt_for_radius(275.0, 220.0, cam) == pytest.approx(
            35.0, abs=1e-9
        )

    def test_monotone_in_radius(self, cam):
        radii = [0, 40, 80, 120, 160, 200, 240, 275, 320]
        tilts = [required_tilt_for_radius(r, 220.0, cam) for r in radii]
        assert all(a <= b for a, b in zip(tilts, tilts[1:]))

    def test_non_increasing_in_height(self, cam):
        heights = [110, 150, 200, 250, 300]
        tilts = [required_tilt_for_radius(200.0, z, cam) for z in heights]
        assert all(a >= b for a, b in zip(tilts, tilts[1:]))

    def test_rejects_bad_arguments(self, cam):
        with pytest.raises(ValueError):
            required_tilt_for_radius(-1.0, 220.0, cam)
        with pytest.raises(ValueError):
            required_tilt_for_radius(10.0, 0.0, cam)


def test_default_camera_anchoring():
    cam = default_camera()
    assert cam.width_px == 640 and cam.height_px == 480
    assert required_tilt_for_radius(275.0, 220.0, cam) == pytest.approx(35.0)
    # half FOV along the pitch axis: atan(275/220) - 35 deg
    gamma = math.degrees(math.atan(240.0 / cam.focal_px))
    assert gamma == pytest.approx(math.degrees(math.atan2(275, 220)) - 35.0)
