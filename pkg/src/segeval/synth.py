"""Deterministic synthetic ground-truth/prediction pairs.

Seven named scenarios exercise the failure modes that motivate
segment-weighted scoring: concentric-disc under/over-segmentation,
multi-segment masks with identical overlap totals but different
per-segment coverage, and mixed-size masks where losing a small segment
entirely competes against mild erosion of every segment.

All shapes are built from "exact-count discs": the n lattice points
closest to a center, ties broken by (row offset, col offset). Any prefix
of that ordering is 4-connected (each pixel has an axis-aligned neighbor
strictly closer to the center), so prefixes double as erosion and
partial-coverage masks with exact pixel counts.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .mask import LabelMask

SCENARIOS = (
    "rings-under",
    "rings-over",
    "multisegment-e",
    "multisegment-f",
    "multisize-b",
    "multisize-c",
    "multisize-d",
)

RING_RADIUS = 20

# (area, (row, col)) anchors; fixed coordinates, canvas just has to cover
# them (see _require_fit).
_MULTISEGMENT_DISCS = ((150, (16, 12)), (30, (16, 30)), (10, (16, 42)))
_MULTISEGMENT_COVER = {"multisegment-e": (120, 10, 5), "multisegment-f": (110, 25, 0)}

_MULTISIZE_LARGE = (600, (20, 20))
_MULTISIZE_SMALL_AREA = 12
_MULTISIZE_SMALL_BASES = ((48, 16), (48, 32), (48, 48))
_MULTISIZE_FP = (60, (10, 52))  # spurious blob for the "-b" variant


@dataclass(frozen=True)
class ScenarioSpec:
    """Which scenario to generate, on what canvas, with what seed.

    ``canvas`` is (width, height). ``seed`` feeds the jitter applied to
    small-disc placement in the multisize scenarios; the other scenarios
    are position-deterministic and ignore it. ``ring_offset`` is the
    radius difference k between ground truth and prediction in the ring
    scenarios.
    """

    name: str
    canvas: tuple = (64, 64)
    seed: int = 0
    ring_offset: int = 5

    def __post_init__(self):
        if self.name not in SCENARIOS:
            raise ValueError(f"unknown scenario {self.name!r}; choose from {SCENARIOS}")
        if len(self.canvas) != 2 or any(int(v) < 1 for v in self.canvas):
            raise ValueError(f"canvas must be two positive integers, got {self.canvas}")
        if self.ring_offset < 1 or self.ring_offset >= RING_RADIUS:
            raise ValueError(
                f"ring_offset must be in [1, {RING_RADIUS - 1}], got {self.ring_offset}"
            )


def disc_offsets(n: int) -> tuple[np.ndarray, np.ndarray]:
    """The n lattice offsets closest to the origin, sorted by (d^2, dr, dc)."""
    if n < 1:
        raise ValueError("disc needs at least one pixel")
    r = math.isqrt(math.ceil(n / math.pi)) + 2
    while True:
        span = np.arange(-r, r + 1)
        dr, dc = np.meshgrid(span, span, indexing="ij")
        dr, dc = dr.ravel(), dc.ravel()
        d2 = dr * dr + dc * dc
        order = np.lexsort((dc, dr, d2))[:n]
        # The window only truncates fairly if every chosen offset is
        # strictly inside it; otherwise widen and retry.
        if len(order) >= n and int(d2[order].max()) < r * r:
            return dr[order], dc[order]
        r *= 2


def _paint(canvas: np.ndarray, center, n: int, prefix: int | None = None):
    """Set the first ``prefix`` pixels (default all n) of an exact-count disc."""
    take = n if prefix is None else prefix
    if take == 0:
        return
    dr, dc = disc_offsets(n)
    rows = center[0] + dr[:take]
    cols = center[1] + dc[:take]
    h, w = canvas.shape
    if rows.min() < 0 or cols.min() < 0 or rows.max() >= h or cols.max() >= w:
        raise ValueError(
            f"canvas {w}x{h} too small: disc of {n} pixels at {tuple(center)} "
            "falls outside it"
        )
    canvas[rows, cols] = 1


def _threshold_disc(canvas: np.ndarray, center, radius: int):
    """Set every pixel within Euclidean distance ``radius`` of center."""
    h, w = canvas.shape
    cy, cx = center
    if cy - radius < 0 or cx - radius < 0 or cy + radius >= h or cx + radius >= w:
        raise ValueError(
            f"canvas {w}x{h} too small: disc of radius {radius} at {tuple(center)} "
            "falls outside it"
        )
    yy, xx = np.ogrid[:h, :w]
    canvas[(yy - cy) ** 2 + (xx - cx) ** 2 <= radius * radius] = 1


def generate(spec: ScenarioSpec) -> tuple[LabelMask, LabelMask]:
    """Build the (ground truth, prediction) pair for a scenario.

    Raises ValueError when the canvas cannot contain the scenario's
    shapes. Minimum canvases: 64x64 for everything at the defaults
    (rings need width and height of at least 2*(RING_RADIUS +
    ring_offset) + 2 for the over-segmentation variant).
    """
    w, h = (int(v) for v in spec.canvas)
    gt = np.zeros((h, w), dtype=np.uint8)
    pred = np.zeros((h, w), dtype=np.uint8)

    if spec.name in ("rings-under", "rings-over"):
        center = (h // 2, w // 2)
        k = spec.ring_offset
        _threshold_disc(gt, center, RING_RADIUS)
        pred_radius = RING_RADIUS - k if spec.name == "rings-under" else RING_RADIUS + k
        _threshold_disc(pred, center, pred_radius)

    elif spec.name in ("multisegment-e", "multisegment-f"):
        covers = _MULTISEGMENT_COVER[spec.name]
        for (area, center), cover in zip(_MULTISEGMENT_DISCS, covers):
            _paint(gt, center, area)
            _paint(pred, center, area, prefix=cover)

    else:  # multisize-b / multisize-c / multisize-d
        rng = np.random.RandomState(spec.seed)
        jitter = rng.randint(-2, 3, size=(len(_MULTISIZE_SMALL_BASES), 2))
        large_area, large_center = _MULTISIZE_LARGE
        small_centers = [
            (base[0] + int(dy), base[1] + int(dx))
            for (base, (dy, dx)) in zip(_MULTISIZE_SMALL_BASES, jitter)
        ]
        _paint(gt, large_center, large_area)
        for c in small_centers:
            _paint(gt, c, _MULTISIZE_SMALL_AREA)

        if spec.name == "multisize-b":
            _paint(pred, large_center, large_area, prefix=330)
            fp_area, fp_center = _MULTISIZE_FP
            _paint(pred, fp_center, fp_area)
        elif spec.name == "multisize-c":
            _paint(pred, large_center, large_area)
            for c in small_centers[:-1]:  # the last small disc is missed
                _paint(pred, c, _MULTISIZE_SMALL_AREA)
        else:  # multisize-d: mild erosion of every disc
            _paint(pred, large_center, large_area, prefix=570)
            for c in small_centers:
                _paint(pred, c, _MULTISIZE_SMALL_AREA, prefix=10)

    return LabelMask(gt), LabelMask(pred)
