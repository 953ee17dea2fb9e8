"""CLI surface: subcommands, file formats, exit codes."""

import json
import subprocess
import sys

import pytest

from ledloc import (
    ColorCode,
    Landmark,
    LandmarkRegistry,
    default_camera,
    save_registry,
)
from ledloc.cli import EXIT_CONFIG, EXIT_OK, EXIT_RUNTIME, main


def camera_doc():
    cam = default_camera()
    return {
        "u_cm_per_px": cam.u_cm_per_px,
        "zc_cm": cam.zc_cm,
        "width_px": cam.width_px,
        "height_px": cam.height_px,
    }


@pytest.fixture
def scene_file(tmp_path):
    # projections of A=(0,0,220) and B=(-10,0,220) seen from (20, 10) at
    # zero attitude, written out by the forward model
    from ledloc import Attitude, WorldPoint, project_tangent_model

    cam = default_camera()
    a = project_tangent_model(WorldPoint(-20.0, -10.0, 220.0), Attitude(), cam)
    b = project_tangent_model(WorldPoint(-30.0, -10.0, 220.0), Attitude(), cam)
    doc = {
        "a_px": [a.px, a.py],
        "b_px": [b.px, b.py],
        "baseline_l_cm": 10.0,
        "accel": [0.0, 0.0],
        "camera": camera_doc(),
    }
    path = tmp_path / "scene.json"
    path.write_text(json.dumps(doc))
    return path


def test_locate_3d(scene_file, capsys):
    assert main(["locate", str(scene_file)]) == EXIT_OK
    out = json.loads(capsys.readouterr().out)
    assert out["x_cm"] == pytest.approx(20.0, abs=1e-6)
    assert out["y_cm"] == pytest.approx(10.0, abs=1e-6)
    assert out["z_cm"] == pytest.approx(220.0, abs=1e-6)
    assert out["frame"] == "cell_local"


def test_locate_2d_with_hint(scene_file, tmp_path, capsys):
    doc = json.loads(scene_file.read_text())
    doc["z_hint"] = 220.0
    path = tmp_path / "scene2d.json"
    path.write_text(json.dumps(doc))
    assert main(["locate", str(path)]) == EXIT_OK
    out = json.loads(capsys.readouterr().out)
    assert out["x_cm"] == pytest.approx(20.0, abs=1e-6)
    assert out["z_cm"] == 220.0


def test_locate_missing_file():
    assert main(["locate", "/nonexistent/scene.json"]) == EXIT_CONFIG


def test_locate_degenerate_scene_is_runtime_error(tmp_path):
    doc = {
        "a_px": [320.0, 250.0],
        "b_px": [320.1, 250.0],  # sub-quarter-pixel baseline: no depth signal
        "baseline_l_cm": 10.0,
        "camera": camera_doc(),
    }
    path = tmp_path / "degenerate.json"
    path.write_text(json.dumps(doc))
    assert main(["locate", str(path)]) == EXIT_RUNTIME


def test_calibrate(tmp_path, capsys):
    path = tmp_path / "cal.json"
    path.write_text(
        json.dumps(
            {"z_cm": 200.0, "x1_off_cm": 0.0, "x2_off_cm": 25.0, "x1_px": 100.0, "x2_px": 50.0}
        )
    )
    assert main(["calibrate", str(path)]) == EXIT_OK
    out = json.loads(capsys.readouterr().out)
    assert out["u_cm_per_px"] == pytest.approx(1.0)
    assert out["zc_cm"] == pytest.approx(400.0)


def test_codebook_count(capsys):
    assert main(["codebook", "count", "6", "3"]) == EXIT_OK
    assert capsys.readouterr().out.strip() == "419496"


def test_codebook_count_infeasible(capsys):
    assert main(["codebook", "count", "4", "4"]) == EXIT_CONFIG


def test_codebook_enumerate(capsys):
    assert main(["codebook", "enumerate", "3", "3"]) == EXIT_OK
    lines = capsys.readouterr().out.splitlines()
    assert len(lines) == 20
    assert lines[0] == "0,3,3,RRRGGGBBB"


def test_codebook_export(tmp_path, capsys):
    out = tmp_path / "codes.txt"
    assert main(["codebook", "export", "3", "3", "--out", str(out)]) == EXIT_OK
    data = out.read_bytes()
    assert data.count(b"\n") == 20
    assert b"\r" not in data


def test_registry_validate(tmp_path, code63, capsys):
    reg = LandmarkRegistry()
    reg.add(Landmark(code=code63))
    path = tmp_path / "registry.json"
    save_registry(reg, path)
    assert main(["registry", "validate", str(path)]) == EXIT_OK
    assert "registry ok" in capsys.readouterr().out

    path.write_text('{"format": 1, "entries": [{"code": ["RRR"]}]}')
    assert main(["registry", "validate", str(path)]) == EXIT_CONFIG


def test_simulate_writes_csv(tmp_path):
    scenario = {
        "sweep": {"axis": "x", "start": -20, "stop": 20, "step": 20},
        "pose": {"y_cm": 10.0, "z_cm": 220.0},
        "trials": 5,
        "mode": "2d",
        "noise": {"quantize": True, "pixel_sigma": 0.0, "accel_sigma": 0.0, "seed": 4},
    }
    spath = tmp_path / "scenario.json"
    spath.write_text(json.dumps(scenario))
    out1 = tmp_path / "a.csv"
    out2 = tmp_path / "b.csv"
    assert main(["simulate", str(spath), "--out", str(out1)]) == EXIT_OK
    assert main(["simulate", str(spath), "--out", str(out2)]) == EXIT_OK
    assert out1.read_bytes() == out2.read_bytes()
    first = out1.read_text().splitlines()
    assert first[0] == "sweep_value,mean_err_cm,max_err_cm,azimuth_err_deg,failures"


def test_simulate_bad_config(tmp_path):
    spath = tmp_path / "bad.json"
    spath.write_text(json.dumps({"sweep": {"axis": "warp", "start": 0, "stop": 1}}))
    assert main(["simulate", str(spath)]) == EXIT_CONFIG


def test_model_gap(tmp_path):
    out = tmp_path / "gap.csv"
    assert main(["model-gap", "--out", str(out)]) == EXIT_OK
    lines = out.read_text().splitlines()
    assert lines[0] == "roll_deg,pitch_deg,px_gap,cm_err"
    assert len(lines) == 1 + 8 * 8


def test_console_entry_point_runs():
    proc = subprocess.run(
        [sys.executable, "-m", "ledloc", "codebook", "count", "3", "3"],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0
    assert proc.stdout.strip() == "20"
