"""Mock producer: synthetic GradCAM-like records for exercising the
export contract without any ML framework installed."""

from __future__ import annotations

from pathlib import Path

import numpy as np

from .errors import InvalidParameter
from .export import SETTINGS, ExportRecord, export_records

IMAGE_SIZE = (224, 224)
TARGET_SIZE = (64, 64)
FEATURE_SIZES = (7, 14, 16)


def _mock_raw_map(rng: np.random.Generator, size: int) -> np.ndarray:
    """A non-negative, unnormalized blob-plus-noise grid at feature scale."""
    yy, xx = np.mgrid[0:size, 0:size].astype(np.float64)
    raw = rng.uniform(0.0, 0.2, (size, size))
    for _ in range(int(rng.integers(1, 3))):
        cy = rng.uniform(0, size - 1)
        cx = rng.uniform(0, size - 1)
        sigma = rng.uniform(1.0, size / 3)
        amp = rng.uniform(0.5, 6.0)
        raw += amp * np.exp(-((yy - cy) ** 2 + (xx - cx) ** 2) / (2 * sigma**2))
    return raw


def _mock_box(rng: np.random.Generator, img_h: int, img_w: int) -> tuple[int, int, int, int]:
    bh = int(rng.integers(img_h // 8, img_h // 2))
    bw = int(rng.integers(img_w // 8, img_w // 2))
    y0 = int(rng.integers(0, img_h - bh))
    x0 = int(rng.integers(0, img_w - bw))
    return (y0, x0, y0 + bh, x0 + bw)


def mock_records(n: int, seed: int) -> list[ExportRecord]:
    if n < 1:
        raise InvalidParameter(f"n must be >= 1, got {n}")
    rng = np.random.Generator(np.random.Philox(seed))
    img_h, img_w = IMAGE_SIZE
    records = []
    for index in range(n):
        size = int(FEATURE_SIZES[rng.integers(0, len(FEATURE_SIZES))])
        n_boxes = int(rng.integers(1, 3))
        records.append(ExportRecord(
            id=f"mock-{seed}-{index:05d}",
            raw_map=_mock_raw_map(rng, size),
            image_size=IMAGE_SIZE,
            target_size=TARGET_SIZE,
            boxes=tuple(_mock_box(rng, img_h, img_w) for _ in range(n_boxes)),
            prompt=f"mock object {index}",
            dataset="mock",
            split="test",
            setting=SETTINGS[index % len(SETTINGS)],
            model="mock_producer",
        ))
    return records


def export_mock_dataset(n: int, seed: int, out_dir: str | Path) -> Path:
    """Write n deterministic synthetic records under out_dir.

    Returns the manifest path; the output validates and evaluates cleanly
    under the evaluation toolkit.
    """
    return export_records(mock_records(n, seed), out_dir)
