"""Pointing-game hit test and the NMS-based uncertainty analysis.

The array-level helpers (_maxima_arrays, _nms_indices) are the batch hot
path; the Peak-based functions wrap them for readability and tests.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import ActivationMap, GroundTruth, MetricConfig, check_same_shape


@dataclass(frozen=True, order=True)
class Peak:
    value: float
    row: int
    col: int


@dataclass(frozen=True)
class NmsResult:
    """Peaks surviving suppression, sorted by (value desc, row asc, col asc)."""

    peaks: tuple[Peak, ...]


@dataclass(frozen=True)
class UncertaintyReport:
    uncertain: bool
    top_value: float
    tied_peaks: tuple[Peak, ...]
    sides: tuple[str, ...]  # "inside" / "outside", aligned with tied_peaks


def global_argmax(amap: ActivationMap) -> tuple[int, int]:
    """Coordinate of the maximum; ties resolve to the first in row-major order."""
    flat = int(np.argmax(amap.values))
    return divmod(flat, amap.width)


def pg_hit(amap: ActivationMap, gt: GroundTruth) -> int:
    """1 iff the global argmax lies inside the union mask."""
    check_same_shape(amap, gt)
    row, col = global_argmax(amap)
    return int(gt.mask[row, col] > 0.0)


def _maxima_arrays(v: np.ndarray, tau: float):
    """(values, rows, cols) of all peaks, sorted (value desc, row, col).

    A peak is strictly above tau and >= each of its existing 8-neighbors;
    only above-threshold candidates are ever compared, which keeps the
    work proportional to the candidate count rather than the grid size.
    """
    rows, cols = np.nonzero(v > tau)
    if rows.size == 0:
        return (np.empty(0), np.empty(0, dtype=np.int64),
                np.empty(0, dtype=np.int64))
    height, width = v.shape
    candidate = v[rows, cols]
    is_peak = np.ones(rows.size, dtype=bool)
    for di in (-1, 0, 1):
        for dj in (-1, 0, 1):
            if di == 0 and dj == 0:
                continue
            nr = rows + di
            nc = cols + dj
            valid = (nr >= 0) & (nr < height) & (nc >= 0) & (nc < width)
            neighbor = v[np.clip(nr, 0, height - 1), np.clip(nc, 0, width - 1)]
            is_peak &= ~valid | (candidate >= neighbor)
    rows, cols, values = rows[is_peak], cols[is_peak], candidate[is_peak]
    order = np.lexsort((cols, rows, -values))
    return values[order], rows[order], cols[order]


def local_maxima(amap: ActivationMap, tau: float) -> list[Peak]:
    """All pixels strictly above tau and >= every 8-neighbor.

    The >= comparison keeps plateau pixels as candidates; NMS collapses
    near-duplicates afterwards. Output sorted by (value desc, row asc,
    col asc).
    """
    if not 0.0 < tau < 1.0:
        raise ValueError("tau must be in (0, 1)")
    values, rows, cols = _maxima_arrays(amap.values, tau)
    return [Peak(float(v), int(r), int(c))
            for v, r, c in zip(values, rows, cols)]


def _nms_indices(rows: np.ndarray, cols: np.ndarray, delta: float) -> list[int]:
    """Greedy suppression over pre-sorted peak coordinates; returns kept
    positions. A peak survives iff it is strictly more than delta
    (Euclidean) from every already-kept peak."""
    frows = rows.astype(np.float64)
    fcols = cols.astype(np.float64)
    alive = np.ones(rows.size, dtype=bool)
    delta_sq = delta * delta
    kept: list[int] = []
    for i in range(rows.size):
        if not alive[i]:
            continue
        kept.append(i)
        dist_sq = (frows - frows[i]) ** 2 + (fcols - fcols[i]) ** 2
        alive &= dist_sq > delta_sq
    return kept


def nms(peaks: list[Peak], delta: float) -> NmsResult:
    """Greedy suppression: keep a peak iff it is > delta (Euclidean) away
    from every already-kept peak. Distances exactly delta suppress.

    `peaks` must already be sorted as produced by `local_maxima`.
    """
    if not peaks:
        return NmsResult(peaks=())
    rows = np.array([p.row for p in peaks])
    cols = np.array([p.col for p in peaks])
    kept = _nms_indices(rows, cols, delta)
    return NmsResult(peaks=tuple(peaks[i] for i in kept))


def pg_uncertainty(amap: ActivationMap, gt: GroundTruth,
                   cfg: MetricConfig) -> UncertaintyReport:
    """Flag instances whose post-NMS tied top peaks straddle the box boundary.

    tied_peaks = kept peaks within tie_tolerance of the largest kept value;
    uncertain iff >= 2 ties with mixed inside/outside labels.
    """
    check_same_shape(amap, gt)
    kept = kept_peaks(amap, cfg)
    return uncertainty_from_kept(kept, gt.mask, cfg.tie_tolerance)


def kept_peaks(amap: ActivationMap, cfg: MetricConfig) -> tuple[Peak, ...]:
    """local_maxima + nms fused on arrays, materializing only survivors."""
    values, rows, cols = _maxima_arrays(amap.values, cfg.maxima_threshold)
    kept = _nms_indices(rows, cols, cfg.nms_radius)
    return tuple(Peak(float(values[i]), int(rows[i]), int(cols[i]))
                 for i in kept)


def uncertainty_from_kept(kept: tuple[Peak, ...], mask: np.ndarray,
                          tie_tolerance: float) -> UncertaintyReport:
    """Tie analysis on an already-suppressed peak list."""
    if not kept:
        return UncertaintyReport(uncertain=False, top_value=0.0,
                                 tied_peaks=(), sides=())
    top = kept[0].value
    tied = tuple(p for p in kept if abs(p.value - top) <= tie_tolerance)
    sides = tuple(
        "inside" if mask[p.row, p.col] > 0.0 else "outside" for p in tied
    )
    uncertain = len(tied) >= 2 and len(set(sides)) > 1
    return UncertaintyReport(uncertain=uncertain, top_value=top,
                             tied_peaks=tied, sides=sides)


def peak_distance(a: Peak, b: Peak) -> float:
    return math.dist((a.row, a.col), (b.row, b.col))
