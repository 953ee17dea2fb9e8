import numpy as np
import pytest

from ledloc import CameraParams, ColorCode, Landmark, default_camera


@pytest.fixture
def example_cam() -> CameraParams:
    """Round-number intrinsics used by the hand-computed expectations."""
    return CameraParams(u_cm_per_px=0.01, zc_cm=5.0, width_px=640, height_px=480)


@pytest.fixture
def cam() -> CameraParams:
    return default_camera()


@pytest.fixture
def code63() -> ColorCode:
    # Balanced 6x3 code, no interior red row, not self-mirrored.
    return ColorCode(("RRR", "GGB", "BRG", "GBB", "RBG", "GBR"))


@pytest.fixture
def landmark63(code63) -> Landmark:
    return Landmark(code=code63, led_spacing_cm=5.0)


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(20260810)
