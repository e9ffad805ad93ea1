"""Raw-map preprocessing: bilinear resampling, min-max normalization, and
box rescaling from image coordinates to the target map grid.

Any producer that matches these two functions emits maps the evaluator
interprets identically: values in [0, 1], grid (H, W) row-major, boxes
(y0, x0, y1, x1) half-open on the same grid.
"""

from __future__ import annotations

import numpy as np
from numpy.typing import NDArray

from .errors import InvalidParameter, NegativeInput, NonFiniteInput


def _sample_coords(src: int, dst: int) -> NDArray[np.float64]:
    """Source-space sample positions for a dst-length axis (align corners)."""
    if dst == 1 or src == 1:
        return np.full(dst, (src - 1) / 2.0)
    return np.arange(dst, dtype=np.float64) * (src - 1) / (dst - 1)


def resample_bilinear(raw: NDArray[np.floating], height: int, width: int) -> NDArray[np.float64]:
    """Bilinear resample a 2D grid to (height, width), endpoints aligned."""
    arr = np.asarray(raw, dtype=np.float64)
    if arr.ndim != 2 or arr.size == 0:
        raise InvalidParameter(f"expected a non-empty 2D grid, got shape {arr.shape}")
    if height < 1 or width < 1:
        raise InvalidParameter(f"target size {height}x{width} must be positive")
    if arr.shape == (height, width):
        return arr.copy()

    rows = _sample_coords(arr.shape[0], height)
    cols = _sample_coords(arr.shape[1], width)
    r0 = np.floor(rows).astype(np.intp)
    c0 = np.floor(cols).astype(np.intp)
    r1 = np.minimum(r0 + 1, arr.shape[0] - 1)
    c1 = np.minimum(c0 + 1, arr.shape[1] - 1)
    fr = (rows - r0)[:, None]
    fc = (cols - c0)[None, :]

    top = arr[np.ix_(r0, c0)] * (1.0 - fc) + arr[np.ix_(r0, c1)] * fc
    bot = arr[np.ix_(r1, c0)] * (1.0 - fc) + arr[np.ix_(r1, c1)] * fc
    return top * (1.0 - fr) + bot * fr


def normalize_and_resample(raw: NDArray[np.floating], height: int, width: int) -> NDArray[np.float64]:
    """Resample to (height, width) and min-max normalize to [0, 1].

    A constant input (max == min) normalizes to all-zeros rather than
    dividing by zero; the evaluator treats such maps as degenerate.
    """
    arr = np.asarray(raw, dtype=np.float64)
    if arr.ndim != 2 or arr.size == 0:
        raise InvalidParameter(f"expected a non-empty 2D grid, got shape {arr.shape}")
    if not np.isfinite(arr).all():
        raise NonFiniteInput("raw map contains NaN or infinite values")
    if arr.min() < 0.0:
        raise NegativeInput("raw map contains negative values")

    out = resample_bilinear(arr, height, width)
    lo = float(out.min())
    hi = float(out.max())
    if hi == lo:
        return np.zeros((height, width), dtype=np.float64)
    out -= lo
    out /= hi - lo
    # guard against round-off nudging values a hair outside [0, 1]
    np.clip(out, 0.0, 1.0, out=out)
    return out


def scale_box(box: tuple[int, int, int, int],
              image_size: tuple[int, int],
              target_size: tuple[int, int]) -> tuple[int, int, int, int]:
    """Rescale a half-open (y0, x0, y1, x1) box from image pixels to the
    target grid.

    Starts are floored and ends are ceiled so the scaled box covers every
    grid cell the original box touches; a box spanning the full image maps
    to the full target grid exactly. Results are clamped in-bounds and kept
    non-degenerate.
    """
    y0, x0, y1, x1 = box
    img_h, img_w = image_size
    tgt_h, tgt_w = target_size
    if img_h < 1 or img_w < 1 or tgt_h < 1 or tgt_w < 1:
        raise InvalidParameter("image and target sizes must be positive")
    if not (0 <= y0 < y1 <= img_h and 0 <= x0 < x1 <= img_w):
        raise InvalidParameter(
            f"box {box} is degenerate or outside the {img_h}x{img_w} image"
        )

    sy0 = (y0 * tgt_h) // img_h
    sx0 = (x0 * tgt_w) // img_w
    sy1 = -((-y1 * tgt_h) // img_h)
    sx1 = -((-x1 * tgt_w) // img_w)
    sy0 = min(max(sy0, 0), tgt_h - 1)
    sx0 = min(max(sx0, 0), tgt_w - 1)
    sy1 = min(max(sy1, sy0 + 1), tgt_h)
    sx1 = min(max(sx1, sx0 + 1), tgt_w)
    return (int(sy0), int(sx0), int(sy1), int(sx1))
