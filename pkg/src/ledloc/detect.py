"""Synthetic camera frames and the stand-in image-processing front end.

``render_frame`` rasterizes a landmark's LEDs as pure-colored discs over
a black background using the tangent-model projector (the same forward
oracle the localization chain inverts). ``extract_blobs`` runs
4-connected component labeling and classifies each blob by its dominant
channel; ``blobs_to_code`` fits the blob cloud back onto a grid, reads
off the observed color code, and returns the canonical header endpoints
A'/B' for the localization pipeline.

Grid fitting uses the principal directions of the centroid cloud rather
than a homography; adequate for tilt up to roughly 45 degrees.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import BinaryIO

import numpy as np
from scipy import ndimage

from .camera import CameraParams, DevicePose, ImagePointF, WorldPoint, project_tangent_model
from .codebook import ColorCode, decode_orientation
from .errors import GridMismatchError, UnprojectableError
from .registry import Landmark

CHANNEL_FOR_COLOR = {"R": 0, "G": 1, "B": 2}
COLOR_FOR_CHANNEL = "RGB"

MIN_BLOB_PX = 4
MIN_CHANNEL_LEVEL = 40
DOMINANCE_MARGIN = 30
MIN_DISC_RADIUS_PX = 2.0

_FOUR_CONNECTED = np.array([[0, 1, 0], [1, 1, 1], [0, 1, 0]])


@dataclass
class Frame:
    """A rendered sensor image, (height, width, 3) uint8, row-major."""

    pixels: np.ndarray

    def __post_init__(self):
        if self.pixels.ndim != 3 or self.pixels.shape[2] != 3:
            raise ValueError("pixels must be (height, width, 3)")
        if self.pixels.dtype != np.uint8:
            raise ValueError("pixels must be uint8")

    @property
    def width(self) -> int:
        return self.pixels.shape[1]

    @property
    def height(self) -> int:
        return self.pixels.shape[0]


@dataclass(frozen=True)
class Blob:
    centroid: ImagePointF
    color_class: str
    pixel_count: int


def render_frame(
    lm: Landmark,
    pose: DevicePose,
    cam: CameraParams,
    pixel_sigma: float = 0.0,
    channel_sigma: float = 0.0,
    led_radius_cm: float = 1.0,
    rng: np.random.Generator | None = None,
) -> Frame:
    """Rasterize the landmark as seen from the given pose.

    Each LED becomes a filled disc of its pure color; the rendered radius
    is the projected physical radius, floored at 2 px. ``pixel_sigma``
    jitters disc centers, ``channel_sigma`` adds Gaussian noise to every
    channel. LEDs outside the frame or the tangent map are simply not
    drawn; a frame with no visible landmark is valid output.
    """
    if rng is None:
        rng = np.random.default_rng(0)
    img = np.zeros((cam.height_px, cam.width_px, 3), dtype=np.float64)
    radius = max(MIN_DISC_RADIUS_PX, led_radius_cm * cam.focal_px / pose.z_cm)
    offsets = lm.led_offsets_cm()
    m, n = lm.code.shape
    for i in range(m):
        for j in range(n):
            ox, oy = offsets[i, j]
            rel = WorldPoint(ox - pose.x_cm, oy - pose.y_cm, pose.z_cm)
            try:
                proj = project_tangent_model(rel, pose.attitude, cam)
            except UnprojectableError:
                continue
            cx, cy = proj.px, proj.py
            if pixel_sigma > 0:
                cx += rng.normal(0.0, pixel_sigma)
                cy += rng.normal(0.0, pixel_sigma)
            _draw_disc(img, cx, cy, radius, CHANNEL_FOR_COLOR[lm.code.rows[i][j]])
    if channel_sigma > 0:
        img += rng.normal(0.0, channel_sigma, size=img.shape)
    return Frame(pixels=np.clip(img, 0, 255).astype(np.uint8))


def _draw_disc(img: np.ndarray, cx: float, cy: float, radius: float, channel: int):
    h, w = img.shape[:2]
    x0 = max(0, int(np.floor(cx - radius)) - 1)
    x1 = min(w - 1, int(np.ceil(cx + radius)) + 1)
    y0 = max(0, int(np.floor(cy - radius)) - 1)
    y1 = min(h - 1, int(np.ceil(cy + radius)) + 1)
    if x0 > x1 or y0 > y1:
        return
    ys, xs = np.mgrid[y0 : y1 + 1, x0 : x1 + 1]
    inside = (xs - cx) ** 2 + (ys - cy) ** 2 <= radius * radius
    img[y0 : y1 + 1, x0 : x1 + 1, channel][inside] = 255.0


def extract_blobs(
    frame: Frame,
    min_blob_px: int = MIN_BLOB_PX,
    min_channel_level: int = MIN_CHANNEL_LEVEL,
    dominance_margin: int = DOMINANCE_MARGIN,
) -> list[Blob]:
    """4-connected components over non-black pixels, intensity-weighted centroids.

    Blobs smaller than ``min_blob_px`` or without a dominant channel
    (margin below ``dominance_margin`` levels) are dropped.
    """
    pixels = frame.pixels.astype(np.float64)
    mask = pixels.max(axis=2) >= min_channel_level
    labels, count = ndimage.label(mask, structure=_FOUR_CONNECTED)
    blobs: list[Blob] = []
    for lab in range(1, count + 1):
        ys, xs = np.nonzero(labels == lab)
        if ys.size < min_blob_px:
            continue
        values = pixels[ys, xs]  # (npix, 3)
        channel_means = values.mean(axis=0)
        order = np.argsort(channel_means)
        if channel_means[order[-1]] - channel_means[order[-2]] < dominance_margin:
            continue
        weights = values.sum(axis=1)
        total = weights.sum()
        cx = float((xs * weights).sum() / total)
        cy = float((ys * weights).sum() / total)
        blobs.append(
            Blob(
                centroid=ImagePointF(cx, cy),
                color_class=COLOR_FOR_CHANNEL[int(order[-1])],
                pixel_count=int(ys.size),
            )
        )
    return blobs


def _principal_axes(centroids: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    centered = centroids - centroids.mean(axis=0)
    cov = centered.T @ centered
    _, vecs = np.linalg.eigh(cov)
    u, v = vecs[:, 1], vecs[:, 0]  # eigh sorts ascending; u is dominant
    # Row direction: the axis closer to image +y, pointed along +y.
    if abs(u[1]) >= abs(v[1]):
        d_row, d_col = u, v
    else:
        d_row, d_col = v, u
    if d_row[1] < 0:
        d_row = -d_row
    # Right-handed reading order: columns to the right of rows.
    if d_col[0] * d_row[1] - d_col[1] * d_row[0] <= 0:
        d_col = -d_col
    return d_row, d_col


# An assignment is accepted only if the centroids sit on an affine image
# of the index lattice to within this fraction of the lattice step; the
# residual of a mis-banded assignment is on the order of a whole step.
MAX_LATTICE_RESIDUAL = 0.35


def _fit_grid(
    centroids: np.ndarray, rows: int, cols: int, d_row: np.ndarray, d_col: np.ndarray
) -> np.ndarray | None:
    """Assign blob indices onto a rows x cols lattice; None when it can't.

    Rows are banded at the rows-1 largest gaps of the d_row projection;
    the candidate is then validated by fitting an affine lattice to the
    assignment and bounding the residual.
    """
    t_row = centroids @ d_row
    order = np.argsort(t_row, kind="stable")
    if rows > 1:
        gaps = np.diff(t_row[order])
        cut_after = np.sort(np.argsort(gaps, kind="stable")[-(rows - 1) :])
        sizes = np.diff(np.concatenate(([0], cut_after + 1, [len(order)])))
        if not np.all(sizes == cols):
            return None
        bands = np.split(order, cut_after + 1)
    else:
        bands = [order]
    grid = np.empty((rows, cols), dtype=int)
    for r, band in enumerate(bands):
        t_col = centroids[band] @ d_col
        grid[r] = band[np.argsort(t_col, kind="stable")]
    # Affine lattice validation
    idx = np.array([(r, c, 1.0) for r in range(rows) for c in range(cols)])
    target = centroids[grid.reshape(-1)]
    coeff, *_ = np.linalg.lstsq(idx, target, rcond=None)
    residual = np.linalg.norm(target - idx @ coeff, axis=1).max()
    step = min(np.linalg.norm(coeff[0]), np.linalg.norm(coeff[1]))
    if step <= 0 or residual > MAX_LATTICE_RESIDUAL * step:
        return None
    return grid


def blobs_to_code(
    blobs: list[Blob], shapes: set[tuple[int, int]]
) -> tuple[ColorCode, ImagePointF, ImagePointF]:
    """Fit the blob cloud onto a registered grid shape and read the code.

    Returns the observed (rotation-unknown) color grid plus the centroids
    of the two header endpoints, already disambiguated through the
    decoded header: A' is the blob at the canonical header's right end.
    """
    count = len(blobs)
    matching = sorted({s for s in shapes if s[0] * s[1] == count})
    if not matching:
        raise GridMismatchError(
            f"{count} blobs match no registered shape {sorted(shapes)}"
        )
    centroids = np.array([(b.centroid.px, b.centroid.py) for b in blobs])
    d_row, d_col = _principal_axes(centroids)
    for m, n in matching:
        for rows, cols in ((m, n), (n, m)):
            grid = _fit_grid(centroids, rows, cols, d_row, d_col)
            if grid is None:
                continue
            observed = ColorCode(
                tuple(
                    "".join(blobs[grid[r, c]].color_class for c in range(cols))
                    for r in range(rows)
                )
            )
            canonical, rotation_deg = decode_orientation(observed, shapes=shapes)
            # Rotate the centroid lattice alongside the code to find the
            # canonical header endpoints in image coordinates.
            lattice = np.rot90(grid, rotation_deg // 90)
            a_blob = blobs[int(lattice[0, -1])]
            b_blob = blobs[int(lattice[0, 0])]
            return observed, a_blob.centroid, b_blob.centroid
    raise GridMismatchError(
        f"{count} blobs do not form a separable grid for shapes {matching}"
    )


def landmark_fully_visible(
    lm: Landmark, pose: DevicePose, cam: CameraParams, margin_px: float = 2.0
) -> bool:
    """True when every LED disc projects entirely inside the sensor.

    Used to sample render poses: clipped discs shift extracted centroids,
    so detection fidelity is only promised for fully visible landmarks.
    """
    radius = max(MIN_DISC_RADIUS_PX, 1.0 * cam.focal_px / pose.z_cm)
    pad = radius + margin_px
    offsets = lm.led_offsets_cm()
    m, n = lm.code.shape
    for i in range(m):
        for j in range(n):
            ox, oy = offsets[i, j]
            rel = WorldPoint(ox - pose.x_cm, oy - pose.y_cm, pose.z_cm)
            try:
                p = project_tangent_model(rel, pose.attitude, cam)
            except UnprojectableError:
                return False
            if not (
                pad <= p.px <= cam.width_px - 1 - pad
                and pad <= p.py <= cam.height_px - 1 - pad
            ):
                return False
    return True


def write_ppm(frame: Frame, target: str | Path | BinaryIO) -> None:
    """Binary PPM (P6) writer; round-trips bit-exactly with read_ppm."""
    header = f"P6\n{frame.width} {frame.height}\n255\n".encode("ascii")
    payload = header + frame.pixels.tobytes()
    if hasattr(target, "write"):
        target.write(payload)
    else:
        Path(target).write_bytes(payload)


def read_ppm(source: str | Path | BinaryIO) -> Frame:
    data = source.read() if hasattr(source, "read") else Path(source).read_bytes()
    if not data.startswith(b"P6"):
        raise ValueError("not a binary PPM (P6) file")
    fields: list[bytes] = []
    pos = 2
    while len(fields) < 3:
        while pos < len(data) and data[pos : pos + 1].isspace():
            pos += 1
        if data[pos : pos + 1] == b"#":  # comment line
            pos = data.index(b"\n", pos) + 1
            continue
        start = pos
        while pos < len(data) and not data[pos : pos + 1].isspace():
            pos += 1
        fields.append(data[start:pos])
    pos += 1  # single whitespace after maxval
    width, height, maxval = (int(f) for f in fields)
    if maxval != 255:
        raise ValueError(f"unsupported maxval {maxval}")
    expected = width * height * 3
    raw = data[pos : pos + expected]
    if len(raw) != expected:
        raise ValueError("truncated PPM payload")
    pixels = np.frombuffer(raw, dtype=np.uint8).reshape(height, width, 3).copy()
    return Frame(pixels=pixels)
