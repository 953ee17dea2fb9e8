"""Landmark registry: cell lookup by color code and local-to-world mapping.

The registry is an immutable lookup table from canonical color codes to
landmark placements. Persistence is a versioned JSON document::

    {
      "format": 1,
      "entries": [
        {
          "code": ["RRR", "GGB", "BGB", ...],
          "origin_cm": [x, y, z],
          "ceiling_cm": 300.0,
          "spacing_cm": 5.0,
          "bearing_deg": 0.0
        },
        ...
      ]
    }

``origin_cm`` is the floor projection of reference LED A (the header
row's right end in canonical orientation); ``bearing_deg`` is the world
bearing of the canonical header direction. Serialization is canonical
(sorted keys, two-space indent, LF), so save -> load -> save is
byte-identical.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .camera import WorldPoint, normalize_angle_deg
from .codebook import ColorCode, decode_orientation, is_valid_identifier, rotate_code
from .errors import ConfigError, FrameError, UnknownLandmarkError
from .localize import FixFrame, PositionFix

REGISTRY_FORMAT = 1


@dataclass(frozen=True)
class Landmark:
    """A placed color-code landmark: code, world anchor, LED geometry."""

    code: ColorCode
    cell_origin_world: WorldPoint = WorldPoint(0.0, 0.0, 0.0)
    ceiling_height_cm: float = 300.0
    led_spacing_cm: float = 5.0
    header_bearing_deg: float = 0.0

    def __post_init__(self):
        if self.ceiling_height_cm <= 0 or self.led_spacing_cm <= 0:
            raise ValueError("ceiling height and LED spacing must be positive")
        if self.code.cols_n < 2:
            raise ValueError("landmark needs at least two header LEDs")

    @property
    def baseline_l_cm(self) -> float:
        """Physical distance between the header endpoints A and B."""
        return self.led_spacing_cm * (self.code.cols_n - 1)

    def led_offsets_cm(self) -> np.ndarray:
        """(M, N, 2) cell-frame xy offsets of every LED relative to A.

        Column index grows with cell x (A is column N-1 of the header),
        row index grows with cell y.
        """
        m, n = self.code.shape
        s = self.led_spacing_cm
        offsets = np.empty((m, n, 2))
        for i in range(m):
            for j in range(n):
                offsets[i, j] = (-(n - 1 - j) * s, i * s)
        return offsets


@dataclass
class LandmarkRegistry:
    """Mapping from canonical codes to landmarks; immutable once loaded."""

    entries: dict[ColorCode, Landmark] = field(default_factory=dict)

    @property
    def shapes(self) -> set[tuple[int, int]]:
        return {code.shape for code in self.entries}

    def add(self, landmark: Landmark) -> None:
        code = landmark.code
        if not is_valid_identifier(code):
            raise ConfigError(f"code {code.rowmajor()!r} is not a valid identifier")
        if code in self.entries:
            raise ConfigError(f"duplicate code {code.rowmajor()!r}")
        for k in (1, 2, 3):
            twin = rotate_code(code, k)
            if twin in self.entries:
                raise ConfigError(
                    f"code {code.rowmajor()!r} is a rotation of a registered code"
                )
        self.entries[code] = landmark


def lookup(
    registry: LandmarkRegistry, observed: ColorCode
) -> tuple[Landmark, int]:
    """Canonicalize an observed grid and fetch its landmark.

    Returns the landmark and the rotation (degrees, counterclockwise
    quarter turns) that maps the observed grid onto the canonical code.
    """
    if not registry.entries:
        raise ConfigError("registry is empty")
    canonical, rotation_deg = decode_orientation(observed, shapes=registry.shapes)
    landmark = registry.entries.get(canonical)
    if landmark is None:
        raise UnknownLandmarkError(
            f"code {canonical.rowmajor()!r} is not registered"
        )
    return landmark, rotation_deg


def to_world(fix: PositionFix, lm: Landmark, rotation_deg: float = 0.0) -> PositionFix:
    """Re-express a cell-local fix in the room frame.

    The local xy is rotated by the landmark's header bearing plus any
    residual grid rotation, translated to the cell origin, and the
    camera-to-ceiling distance becomes height above the floor. Pass
    rotation_deg=0 when the fix was computed from canonically labeled
    A/B points (the usual pipeline); the lookup rotation then only serves
    as a discrete cross-check of the estimated azimuth.
    """
    if fix.frame is FixFrame.WORLD:
        raise FrameError("fix is already in the world frame")
    ang = math.radians(lm.header_bearing_deg + rotation_deg)
    c, s = math.cos(ang), math.sin(ang)
    wx = c * fix.x_cm - s * fix.y_cm + lm.cell_origin_world.x_cm
    wy = s * fix.x_cm + c * fix.y_cm + lm.cell_origin_world.y_cm
    wz = lm.ceiling_height_cm - fix.z_cm
    azimuth = normalize_angle_deg(
        fix.azimuth_deg + lm.header_bearing_deg + rotation_deg
    )
    return PositionFix(wx, wy, wz, azimuth, FixFrame.WORLD)


def registry_to_document(registry: LandmarkRegistry) -> dict:
    entries = []
    for code in sorted(registry.entries, key=lambda c: (c.shape, c.rows)):
        lm = registry.entries[code]
        origin = lm.cell_origin_world
        entries.append(
            {
                "code": list(code.rows),
                "origin_cm": [origin.x_cm, origin.y_cm, origin.z_cm],
                "ceiling_cm": lm.ceiling_height_cm,
                "spacing_cm": lm.led_spacing_cm,
                "bearing_deg": lm.header_bearing_deg,
            }
        )
    return {"format": REGISTRY_FORMAT, "entries": entries}


def registry_from_document(doc: dict) -> LandmarkRegistry:
    if not isinstance(doc, dict) or doc.get("format") != REGISTRY_FORMAT:
        raise ConfigError(f"unsupported registry document (format != {REGISTRY_FORMAT})")
    raw_entries = doc.get("entries")
    if not isinstance(raw_entries, list):
        raise ConfigError("registry document lacks an 'entries' array")
    registry = LandmarkRegistry()
    for i, raw in enumerate(raw_entries):
        try:
            origin = raw["origin_cm"]
            landmark = Landmark(
                code=ColorCode(tuple(raw["code"])),
                cell_origin_world=WorldPoint(*map(float, origin)),
                ceiling_height_cm=float(raw["ceiling_cm"]),
                led_spacing_cm=float(raw["spacing_cm"]),
                header_bearing_deg=float(raw["bearing_deg"]),
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise ConfigError(f"registry entry {i} is malformed: {exc}") from exc
        registry.add(landmark)
    return registry


def save_registry(registry: LandmarkRegistry, path: str | Path) -> None:
    text = json.dumps(registry_to_document(registry), indent=2, sort_keys=True)
    Path(path).write_text(text + "\n", encoding="utf-8", newline="\n")


def load_registry(path: str | Path) -> LandmarkRegistry:
    try:
        doc = json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise ConfigError(f"registry file is not valid JSON: {exc}") from exc
    return registry_from_document(doc)
