"""Shared domain types and coordinate conventions.

Conventions used everywhere in this package:
- grids are row-major, value at (i, j) with i = row (y), j = column (x);
- boxes are (y0, x0, y1, x1) and half-open: pixel (i, j) is inside iff
  y0 <= i < y1 and x0 <= j < x1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from numpy.typing import NDArray

from .errors import (
    BoxOutOfBounds,
    DegenerateBox,
    EmptyBoxList,
    EmptyMap,
    NonFiniteValue,
    OutOfRangeValue,
    ShapeMismatch,
)


def _freeze(arr: np.ndarray) -> np.ndarray:
    arr.flags.writeable = False
    return arr


def validate_map_values(values: NDArray[np.floating]) -> None:
    """Raise unless `values` is a non-empty 2D grid of finite reals in [0, 1]."""
    if values.ndim != 2 or values.size == 0:
        raise EmptyMap(f"expected a non-empty 2D grid, got shape {values.shape}")
    # min/max propagate NaN and inf, so two reductions cover both checks
    lo, hi = float(values.min()), float(values.max())
    if math.isnan(lo) or math.isinf(lo) or math.isinf(hi):
        raise NonFiniteValue("activation map contains NaN or infinite values")
    if lo < 0.0 or hi > 1.0:
        raise OutOfRangeValue(f"activation values must lie in [0, 1], got range [{lo}, {hi}]")


@dataclass(frozen=True)
class ActivationMap:
    """H x W grid of activation values in [0, 1]."""

    values: NDArray[np.float64]

    def __post_init__(self) -> None:
        values = np.asarray(self.values, dtype=np.float64)
        validate_map_values(values)
        object.__setattr__(self, "values", _freeze(values))

    @property
    def height(self) -> int:
        return self.values.shape[0]

    @property
    def width(self) -> int:
        return self.values.shape[1]

    @property
    def shape(self) -> tuple[int, int]:
        return self.values.shape  # type: ignore[return-value]


def validate_map(amap: ActivationMap) -> None:
    """Re-check the ActivationMap invariants (construction already enforces them)."""
    validate_map_values(amap.values)


@dataclass(frozen=True, order=True)
class BoundingBox:
    """Half-open pixel box (y0, x0, y1, x1) in map-grid coordinates."""

    y0: int
    x0: int
    y1: int
    x1: int

    def __post_init__(self) -> None:
        if self.y0 >= self.y1 or self.x0 >= self.x1:
            raise DegenerateBox(f"box {self.as_tuple()} has an empty extent")
        if self.y0 < 0 or self.x0 < 0:
            raise BoxOutOfBounds(f"box {self.as_tuple()} has negative coordinates")

    def as_tuple(self) -> tuple[int, int, int, int]:
        return (self.y0, self.x0, self.y1, self.x1)

    def check_bounds(self, height: int, width: int) -> None:
        if self.y1 > height or self.x1 > width:
            raise BoxOutOfBounds(
                f"box {self.as_tuple()} exceeds the {height}x{width} grid"
            )

    def contains(self, row: int, col: int) -> bool:
        return self.y0 <= row < self.y1 and self.x0 <= col < self.x1


@dataclass(frozen=True)
class GroundTruth:
    """Union of one or more boxes plus the derived binary mask."""

    boxes: tuple[BoundingBox, ...]
    mask: NDArray[np.float64]

    @property
    def height(self) -> int:
        return self.mask.shape[0]

    @property
    def width(self) -> int:
        return self.mask.shape[1]


def make_ground_truth(boxes: list[BoundingBox] | tuple[BoundingBox, ...],
                      height: int, width: int) -> GroundTruth:
    """Build the union indicator mask of `boxes` on an H x W grid."""
    if not boxes:
        raise EmptyBoxList("ground truth requires at least one box")
    mask = np.zeros((height, width), dtype=np.float64)
    for box in boxes:
        box.check_bounds(height, width)
        mask[box.y0:box.y1, box.x0:box.x1] = 1.0
    return GroundTruth(boxes=tuple(boxes), mask=_freeze(mask))


def check_same_shape(amap: ActivationMap, gt: GroundTruth) -> None:
    if amap.shape != gt.mask.shape:
        raise ShapeMismatch(
            f"map is {amap.shape}, ground truth is {gt.mask.shape}"
        )


@dataclass(frozen=True)
class MetricConfig:
    """All tunable constants; defaults follow the reference experiment setup."""

    binarize_threshold: float = 0.5
    maxima_threshold: float = 0.7   # tau: local maxima must exceed this
    nms_radius: float = 50.0        # delta: Euclidean suppression radius, pixels
    epsilon: float = 1e-8
    tie_tolerance: float = 1e-6

    def __post_init__(self) -> None:
        if not 0.0 < self.binarize_threshold < 1.0:
            raise ValueError("binarize_threshold must be in (0, 1)")
        if not 0.0 < self.maxima_threshold < 1.0:
            raise ValueError("maxima_threshold must be in (0, 1)")
        if self.nms_radius <= 0.0:
            raise ValueError("nms_radius must be positive")
        if self.epsilon <= 0.0:
            raise ValueError("epsilon must be positive")
        if self.tie_tolerance < 0.0:
            raise ValueError("tie_tolerance must be non-negative")


@dataclass(frozen=True)
class InstanceMetrics:
    """Full per-instance score record."""

    iou_soft: float
    iou_binary: float
    dice_soft: float
    dice_binary: float
    wdp_soft: float
    wdp_binary: float
    io_ratio: float
    pg_hit: int
    pg_uncertain: bool
    argmax_coord: tuple[int, int]
    nms_maxima: tuple[tuple[float, int, int], ...] = field(default=())
    degenerate_map: bool = False

    SCALAR_FIELDS = (
        "iou_soft", "iou_binary", "dice_soft", "dice_binary",
        "wdp_soft", "wdp_binary", "io_ratio",
    )

    def scalars(self) -> dict[str, float]:
        return {name: getattr(self, name) for name in self.SCALAR_FIELDS}
