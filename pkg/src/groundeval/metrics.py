"""Overlap and penalty metrics on activation maps vs. box masks.

All ratio-style scores use the closed form x / (x + y) in place of
sigmoid(log(x / y)); the two are identical wherever the latter is defined,
and the closed form stays finite at x = 0 or y = 0.
"""

from __future__ import annotations

import warnings

import numpy as np
from numpy.typing import NDArray

from .core import ActivationMap, GroundTruth, MetricConfig, check_same_shape
from .errors import DegenerateMapWarning, ShapeMismatch


def binarize(amap: ActivationMap, threshold: float) -> ActivationMap:
    """Threshold strictly: values > threshold become 1, everything else 0."""
    if not 0.0 < threshold < 1.0:
        raise ValueError("threshold must be in (0, 1)")
    return ActivationMap((amap.values > threshold).astype(np.float64))


def iou(amap: ActivationMap, gt: GroundTruth) -> float:
    """Soft IoU: sum(A*M) / (sum(A) + sum(M) - sum(A*M)).

    Reduces to set IoU on binarized maps; 0 when the denominator vanishes.
    """
    check_same_shape(amap, gt)
    inter = float(np.sum(amap.values * gt.mask))
    denom = float(np.sum(amap.values)) + float(np.sum(gt.mask)) - inter
    return inter / denom if denom > 0.0 else 0.0


def dice(amap: ActivationMap, gt: GroundTruth) -> float:
    """Soft Dice: 2*sum(A*M) / (sum(A) + sum(M)); 0 on a zero denominator."""
    check_same_shape(amap, gt)
    inter = float(np.sum(amap.values * gt.mask))
    denom = float(np.sum(amap.values)) + float(np.sum(gt.mask))
    return 2.0 * inter / denom if denom > 0.0 else 0.0


def box_distance_grid(box, height: int, width: int) -> NDArray[np.float64]:
    """Chebyshev-style signed distance of every pixel from one box:

        D[i, j] = max(max(y0 - i, i - y1), max(x0 - j, j - x1))

    Negative strictly inside the open box interior; >= 0 elsewhere.
    """
    rows = np.arange(height, dtype=np.float64)[:, None]
    cols = np.arange(width, dtype=np.float64)[None, :]
    dy = np.maximum(box.y0 - rows, rows - box.y1)
    dx = np.maximum(box.x0 - cols, cols - box.x1)
    return np.maximum(dy, dx)


def distance_map(gt: GroundTruth, height: int, width: int) -> NDArray[np.float64]:
    """Per-pixel distance to the nearest ground-truth box (min over boxes)."""
    if gt.mask.shape != (height, width):
        raise ShapeMismatch(
            f"ground truth is {gt.mask.shape}, requested grid is {(height, width)}"
        )
    grids = [box_distance_grid(box, height, width) for box in gt.boxes]
    return np.minimum.reduce(grids)


def penalty_map(amap: ActivationMap, gt: GroundTruth,
                dmap: NDArray[np.float64]) -> NDArray[np.float64]:
    """Weighted penalty P = A * (1 - M) * D; non-negative everywhere."""
    check_same_shape(amap, gt)
    if dmap.shape != amap.shape:
        raise ShapeMismatch(f"distance map is {dmap.shape}, map is {amap.shape}")
    return amap.values * (1.0 - gt.mask) * dmap


def wdp(amap: ActivationMap, gt: GroundTruth, cfg: MetricConfig,
        dmap: NDArray[np.float64] | None = None) -> float:
    """Weighted Distance Penalty, lower is better.

    Closed form sum(P) / (sum(P) + sum(A) + eps), equal to
    sigmoid(log(sum(P) / (sum(A) + eps))) wherever sum(P) > 0.
    """
    check_same_shape(amap, gt)
    if dmap is None:
        dmap = distance_map(gt, amap.height, amap.width)
    p_sum = float(np.sum(penalty_map(amap, gt, dmap)))
    a_sum = float(np.sum(amap.values))
    return p_sum / (p_sum + a_sum + cfg.epsilon)


def io_ratio(amap: ActivationMap, gt: GroundTruth) -> float:
    """Inside/outside activation mass ratio, higher is better.

    Closed form S_in / (S_in + S_out) = S_in / sum(A), equal to
    sigmoid(log(S_in / S_out)). A zero-mass map scores 0 and warns.
    """
    check_same_shape(amap, gt)
    s_inside = float(np.sum(amap.values * gt.mask))
    s_total = float(np.sum(amap.values))
    if s_total == 0.0:
        warnings.warn(
            "activation map has zero total mass; io_ratio set to 0",
            DegenerateMapWarning,
            stacklevel=2,
        )
        return 0.0
    return s_inside / s_total
