"""Synthetic activation maps and independent brute-force oracles.

The oracles deliberately evaluate the literal sigmoid(log(x / y)) ratio
forms and per-pixel Python loops, sharing no code with the production
metric implementations, so oracle-vs-production agreement certifies both
the algebraic closed-form identities and the vectorized kernels.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import (
    ActivationMap,
    BoundingBox,
    GroundTruth,
    InstanceMetrics,
    MetricConfig,
)
from .errors import BoxTooLarge, InvalidBlob, InvalidMasses
from .pointing import NmsResult, Peak


@dataclass(frozen=True)
class BlobSpec:
    center: tuple[int, int]   # (row, col)
    sigma: float              # pixels
    amplitude: float          # (0, 1]


def gaussian_map(height: int, width: int, blobs: list[BlobSpec],
                 noise: float = 0.0, seed: int = 0) -> ActivationMap:
    """Sum of isotropic Gaussians plus seeded uniform noise in [0, noise],
    clipped and min-max normalized to [0, 1].

    Noise comes from a counter-based generator (Philox) keyed by the seed
    alone, so identical seeds give identical bytes on any platform.
    """
    for blob in blobs:
        ci, cj = blob.center
        if not (0 <= ci < height and 0 <= cj < width):
            raise InvalidBlob(f"blob center {blob.center} outside {height}x{width}")
        if blob.sigma <= 0.0:
            raise InvalidBlob(f"blob sigma must be positive, got {blob.sigma}")
        if not 0.0 < blob.amplitude <= 1.0:
            raise InvalidBlob(f"blob amplitude must be in (0, 1], got {blob.amplitude}")
    rows = np.arange(height, dtype=np.float64)[:, None]
    cols = np.arange(width, dtype=np.float64)[None, :]
    values = np.zeros((height, width), dtype=np.float64)
    for blob in blobs:
        ci, cj = blob.center
        dist_sq = (rows - ci) ** 2 + (cols - cj) ** 2
        values += blob.amplitude * np.exp(-dist_sq / (2.0 * blob.sigma ** 2))
    if noise > 0.0:
        rng = np.random.Generator(np.random.Philox(seed))
        values += rng.uniform(0.0, noise, size=(height, width))
    values = np.clip(values, 0.0, None)
    peak = float(values.max())
    low = float(values.min())
    if peak > low:
        values = (values - low) / (peak - low)
    else:
        values = np.zeros_like(values)
    return ActivationMap(values)


def _spike_map(height: int, width: int,
               spikes: dict[tuple[int, int], float]) -> ActivationMap:
    values = np.zeros((height, width), dtype=np.float64)
    for (row, col), value in spikes.items():
        values[row, col] = value
    return ActivationMap(values)


def scenario1_fixture(height: int, width: int, box: BoundingBox,
                      delta: float = 50.0,
                      variant: str = "mixed") -> ActivationMap:
    """Equal-amplitude isolated peaks placed to probe tie-break ambiguity.

    variant "mixed": one 1.0 peak inside the box and one outside, > delta
    apart, guaranteed to be flagged uncertain. "inside_only" and "unequal"
    are the negative controls (consistent labels / no tie).
    """
    inside = ((box.y0 + box.y1) // 2, (box.x0 + box.x1) // 2)
    # farthest outside pixel from the inside peak
    best: tuple[int, int] | None = None
    best_dist = delta
    for corner in ((0, 0), (0, width - 1), (height - 1, 0), (height - 1, width - 1)):
        if box.contains(*corner):
            continue
        d = math.dist(inside, corner)
        if d > best_dist:
            best, best_dist = corner, d
    if best is None:
        # corners all inside or too close: scan the whole outside region
        for row in range(height):
            for col in range(width):
                if box.contains(row, col):
                    continue
                d = math.dist(inside, (row, col))
                if d > best_dist:
                    best, best_dist = (row, col), d
    if best is None:
        raise BoxTooLarge(
            f"no outside pixel lies > {delta} px from the box center "
            f"on a {height}x{width} grid"
        )
    if variant == "mixed":
        return _spike_map(height, width, {inside: 1.0, best: 1.0})
    if variant == "unequal":
        return _spike_map(height, width, {inside: 1.0, best: 0.9})
    if variant == "inside_only":
        second = (box.y0, box.x0)
        if second == inside:
            second = (min(box.y1 - 1, inside[0] + 1), inside[1])
        spikes = {inside: 1.0}
        if second != inside:
            spikes[second] = 1.0
        return _spike_map(height, width, spikes)
    raise ValueError(f"unknown variant {variant!r}")


def scenario2_fixtures(height: int, width: int, box: BoundingBox,
                       outside_masses: list[float]) -> list[ActivationMap]:
    """Maps sharing one inside unit peak with growing outside mass.

    pg_hit is 1 for every map; io_ratio equals 1 / (1 + mass) exactly
    (mass spread evenly over a power-of-two count of outside pixels).
    """
    if not outside_masses or any(m < 0 for m in outside_masses):
        raise InvalidMasses("outside masses must be non-negative")
    if list(outside_masses) != sorted(outside_masses):
        raise InvalidMasses("outside masses must be ascending")
    box.check_bounds(height, width)
    inside = ((box.y0 + box.y1) // 2, (box.x0 + box.x1) // 2)
    outside_pixels = [
        (row, col)
        for row in range(height)
        for col in range(width)
        if not box.contains(row, col)
    ]
    maps = []
    for mass in outside_masses:
        spikes = {inside: 1.0}
        if mass > 0.0:
            count = 8
            while mass / count > 0.5:
                count *= 2
            if count > len(outside_pixels):
                raise InvalidMasses(
                    f"mass {mass} needs {count} outside pixels, "
                    f"only {len(outside_pixels)} available"
                )
            per_pixel = mass / count
            for pixel in outside_pixels[:count]:
                spikes[pixel] = per_pixel
        maps.append(_spike_map(height, width, spikes))
    return maps


# --- literal-formula oracles -------------------------------------------------

def sigmoid_log_ratio(numerator: float, denominator: float) -> float:
    """Literal sigmoid(log(num / den)) with explicit infinity handling."""
    if numerator == 0.0:
        return 0.0          # log(0) = -inf, sigmoid(-inf) = 0
    if denominator == 0.0:
        return 1.0          # log(+inf), sigmoid(+inf) = 1
    return 1.0 / (1.0 + math.exp(-math.log(numerator / denominator)))


def _box_distance(box: BoundingBox, row: int, col: int) -> float:
    return max(max(box.y0 - row, row - box.y1), max(box.x0 - col, col - box.x1))


def oracle_metrics(amap: ActivationMap, gt: GroundTruth,
                   cfg: MetricConfig) -> InstanceMetrics:
    """Every metric via direct per-pixel loops and literal ratio forms."""
    height, width = amap.shape
    values = amap.values
    mask = gt.mask

    def overlap_scores(grid):
        inter = a_sum = m_sum = 0.0
        for i in range(height):
            for j in range(width):
                inter += grid[i][j] * mask[i][j]
                a_sum += grid[i][j]
                m_sum += mask[i][j]
        union = a_sum + m_sum - inter
        iou_val = inter / union if union > 0 else 0.0
        dice_val = 2.0 * inter / (a_sum + m_sum) if a_sum + m_sum > 0 else 0.0
        return iou_val, dice_val, a_sum, inter

    def wdp_score(grid):
        p_sum = a_sum = 0.0
        for i in range(height):
            for j in range(width):
                d = min(_box_distance(box, i, j) for box in gt.boxes)
                p_sum += grid[i][j] * (1.0 - mask[i][j]) * d
                a_sum += grid[i][j]
        return sigmoid_log_ratio(p_sum, a_sum + cfg.epsilon)

    binary = [[1.0 if values[i][j] > cfg.binarize_threshold else 0.0
               for j in range(width)] for i in range(height)]

    iou_soft, dice_soft, a_total, s_inside = overlap_scores(values)
    iou_binary, dice_binary, _, _ = overlap_scores(binary)
    s_outside = a_total - s_inside
    if a_total == 0.0:
        io = 0.0
    else:
        io = sigmoid_log_ratio(s_inside, s_outside)

    # pointing game: full scan, row-major-first maximum
    best_val, best_pos = -1.0, (0, 0)
    for i in range(height):
        for j in range(width):
            if values[i][j] > best_val:
                best_val, best_pos = values[i][j], (i, j)
    hit = int(mask[best_pos[0]][best_pos[1]] > 0.0)

    # local maxima + NMS + tie analysis, all by loops
    peaks = []
    for i in range(height):
        for j in range(width):
            v = values[i][j]
            if v <= cfg.maxima_threshold:
                continue
            is_peak = True
            for di in (-1, 0, 1):
                for dj in (-1, 0, 1):
                    if di == 0 and dj == 0:
                        continue
                    ni, nj = i + di, j + dj
                    if 0 <= ni < height and 0 <= nj < width and values[ni][nj] > v:
                        is_peak = False
            if is_peak:
                peaks.append(Peak(float(v), i, j))
    peaks.sort(key=lambda p: (-p.value, p.row, p.col))
    kept = oracle_nms(peaks, cfg.nms_radius).peaks
    uncertain = False
    tied: tuple[Peak, ...] = ()
    if kept:
        top = kept[0].value
        tied = tuple(p for p in kept if abs(p.value - top) <= cfg.tie_tolerance)
        labels = {mask[p.row][p.col] > 0.0 for p in tied}
        uncertain = len(tied) >= 2 and len(labels) > 1

    return InstanceMetrics(
        iou_soft=iou_soft,
        iou_binary=iou_binary,
        dice_soft=dice_soft,
        dice_binary=dice_binary,
        wdp_soft=wdp_score(values),
        wdp_binary=wdp_score(binary),
        io_ratio=io,
        pg_hit=hit,
        pg_uncertain=uncertain,
        argmax_coord=best_pos,
        nms_maxima=tuple((p.value, p.row, p.col) for p in tied),
        degenerate_map=a_total == 0.0,
    )


def oracle_nms(peaks: list[Peak], delta: float) -> NmsResult:
    """Exhaustive greedy suppression, pure Python."""
    kept: list[Peak] = []
    for peak in peaks:
        if all(math.dist((peak.row, peak.col), (k.row, k.col)) > delta
               for k in kept):
            kept.append(peak)
    return NmsResult(peaks=tuple(kept))
