"""Command-line front end.

Subcommands: locate, calibrate, codebook (count|enumerate|export),
registry (validate), simulate, model-gap. Exit codes: 0 on success, 2 for
configuration problems (bad files, bad shapes), 3 for runtime failures
(degenerate geometry, unknown landmarks).
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import __version__
from .calibration import CalibrationScene, calibrate
from .codebook import codebook_entries, count_identifiers, write_codebook
from .errors import CapExceededError, ConfigError, InfeasibleShapeError, LedlocError
from .harness import (
    ModelGapConfig,
    camera_from_document,
    model_gap_report,
    run_scenario,
    scenario_from_document,
)
from .camera import AccelSample, ImagePointF
from .localize import ReferenceObservation, locate
from .registry import load_registry

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_RUNTIME = 3


def _load_json(path: str) -> dict:
    try:
        return json.loads(Path(path).read_text(encoding="utf-8"))
    except FileNotFoundError as exc:
        raise ConfigError(f"file not found: {path}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path} is not valid JSON: {exc}") from exc


def _cmd_locate(args: argparse.Namespace) -> int:
    doc = _load_json(args.scene)
    try:
        cam = camera_from_document(doc.get("camera"))
        a = doc["a_px"]
        b = doc["b_px"]
        accel = doc.get("accel", [0.0, 0.0])
        obs = ReferenceObservation(
            a_px=ImagePointF(float(a[0]), float(a[1])),
            b_px=ImagePointF(float(b[0]), float(b[1])),
            baseline_l_cm=float(doc["baseline_l_cm"]),
            accel=AccelSample(float(accel[0]), float(accel[1])),
        )
        z_hint = doc.get("z_hint")
        z_hint = float(z_hint) if z_hint is not None else None
    except (KeyError, TypeError, ValueError, IndexError) as exc:
        raise ConfigError(f"malformed scene document: {exc}") from exc
    fix = locate(obs, cam, z_hint=z_hint)
    print(
        json.dumps(
            {
                "x_cm": fix.x_cm,
                "y_cm": fix.y_cm,
                "z_cm": fix.z_cm,
                "azimuth_deg": fix.azimuth_deg,
                "frame": fix.frame.value,
            },
            indent=2,
            sort_keys=True,
        )
    )
    return EXIT_OK


def _cmd_calibrate(args: argparse.Namespace) -> int:
    doc = _load_json(args.scene)
    try:
        scene = CalibrationScene(
            z_cm=float(doc["z_cm"]),
            x1_off_cm=float(doc["x1_off_cm"]),
            x2_off_cm=float(doc["x2_off_cm"]),
            x1_px=float(doc["x1_px"]),
            x2_px=float(doc["x2_px"]),
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise ConfigError(f"malformed calibration scene: {exc}") from exc
    cam = calibrate(scene)
    print(
        json.dumps(
            {"u_cm_per_px": cam.u_cm_per_px, "zc_cm": cam.zc_cm},
            indent=2,
            sort_keys=True,
        )
    )
    return EXIT_OK


def _cmd_codebook(args: argparse.Namespace) -> int:
    m, n = args.rows, args.cols
    if args.action == "count":
        if args.exclude_mirrors:
            total = sum(
                1 for _ in codebook_entries(m, n, exclude_mirrors=True)
            )
        else:
            total = count_identifiers(m, n)
        print(total)
        return EXIT_OK
    entries = codebook_entries(m, n, exclude_mirrors=args.exclude_mirrors)
    if args.action == "enumerate":
        written = write_codebook(entries, sys.stdout)
    else:  # export
        with open(args.out, "w", encoding="utf-8", newline="\n") as stream:
            written = write_codebook(entries, stream)
        print(f"wrote {written} codes to {args.out}")
    return EXIT_OK


def _cmd_registry(args: argparse.Namespace) -> int:
    registry = load_registry(args.file)  # add() re-checks every invariant
    print(f"registry ok: {len(registry.entries)} landmarks, shapes {sorted(registry.shapes)}")
    return EXIT_OK


def _cmd_simulate(args: argparse.Namespace) -> int:
    cfg = scenario_from_document(_load_json(args.scenario))
    report = run_scenario(cfg)
    csv_text = report.to_csv()
    if args.out:
        Path(args.out).write_text(csv_text, encoding="utf-8", newline="\n")
    else:
        sys.stdout.write(csv_text)
    return EXIT_OK


def _cmd_model_gap(args: argparse.Namespace) -> int:
    if args.config:
        doc = _load_json(args.config)
        try:
            cfg = ModelGapConfig(
                tilt_max_deg=float(doc.get("tilt_max_deg", 35.0)),
                tilt_step_deg=float(doc.get("tilt_step_deg", 5.0)),
                offset_x_cm=float(doc.get("offset_x_cm", 100.0)),
                offset_y_cm=float(doc.get("offset_y_cm", 40.0)),
                z_cm=float(doc.get("z_cm", 220.0)),
                azimuth_deg=float(doc.get("azimuth_deg", 0.0)),
                baseline_l_cm=float(doc.get("baseline_l_cm", 10.0)),
                camera=camera_from_document(doc.get("camera")),
            )
        except (TypeError, ValueError) as exc:
            raise ConfigError(f"malformed model-gap config: {exc}") from exc
    else:
        cfg = ModelGapConfig()
    csv_text = model_gap_report(cfg)
    if args.out:
        Path(args.out).write_text(csv_text, encoding="utf-8", newline="\n")
    else:
        sys.stdout.write(csv_text)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ledloc",
        description="Indoor positioning from color-coded LED landmarks",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("locate", help="one-shot position fix from a scene file")
    p.add_argument("scene", help="JSON observation scene")
    p.set_defaults(func=_cmd_locate)

    p = sub.add_parser("calibrate", help="recover U and Zc from a calibration scene")
    p.add_argument("scene", help="JSON calibration scene")
    p.set_defaults(func=_cmd_calibrate)

    p = sub.add_parser("codebook", help="count, enumerate, or export identifiers")
    p.add_argument("action", choices=("count", "enumerate", "export"))
    p.add_argument("rows", type=int, help="grid rows M")
    p.add_argument("cols", type=int, help="grid columns N")
    p.add_argument("--out", help="output file (export)")
    p.add_argument(
        "--exclude-mirrors",
        action="store_true",
        help="keep only one of each mirror pair (count by enumeration)",
    )
    p.set_defaults(func=_cmd_codebook)

    p = sub.add_parser("registry", help="registry maintenance")
    p.add_argument("action", choices=("validate",))
    p.add_argument("file", help="registry JSON document")
    p.set_defaults(func=_cmd_registry)

    p = sub.add_parser("simulate", help="run an error-sweep scenario, emit CSV")
    p.add_argument("scenario", help="JSON scenario config")
    p.add_argument("--out", help="CSV output path (default stdout)")
    p.set_defaults(func=_cmd_simulate)

    p = sub.add_parser(
        "model-gap", help="tangent-vs-rotation projector discrepancy CSV"
    )
    p.add_argument("--config", help="optional JSON config")
    p.add_argument("--out", help="CSV output path (default stdout)")
    p.set_defaults(func=_cmd_model_gap)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "codebook" and args.action == "export" and not args.out:
        parser.error("codebook export requires --out")
    try:
        return args.func(args)
    except (ConfigError, InfeasibleShapeError, CapExceededError) as exc:
        # bad documents or impossible requests: the user's input is wrong
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except LedlocError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
