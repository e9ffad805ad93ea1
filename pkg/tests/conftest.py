"""Shared random-instance generators for the test suite."""

from __future__ import annotations

import numpy as np
import pytest

from groundeval.core import ActivationMap, BoundingBox, GroundTruth, make_ground_truth


def make_rng(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(seed))


def random_box(rng: np.random.Generator, height: int, width: int,
               margin: int = 2) -> BoundingBox:
    """A box at least `margin` pixels away from the top-left corner, so at
    least one outside pixel has strictly positive box distance."""
    y0 = int(rng.integers(margin, height - 1))
    x0 = int(rng.integers(margin, width - 1))
    y1 = int(rng.integers(y0 + 1, height + 1))
    x1 = int(rng.integers(x0 + 1, width + 1))
    return BoundingBox(y0, x0, y1, x1)


def random_instance(rng: np.random.Generator, height: int = 32,
                    width: int = 32, max_boxes: int = 2,
                    strictly_positive: bool = True) -> tuple[ActivationMap, GroundTruth]:
    """A noisy map (optionally positive everywhere) with 1..max_boxes boxes."""
    low = 0.01 if strictly_positive else 0.0
    values = rng.uniform(low, 1.0, size=(height, width))
    # sprinkle a few near-1 spikes so the pointing-game path gets exercised
    for _ in range(int(rng.integers(0, 4))):
        values[rng.integers(0, height), rng.integers(0, width)] = float(
            rng.uniform(0.85, 1.0))
    amap = ActivationMap(values)
    n_boxes = int(rng.integers(1, max_boxes + 1))
    boxes = [random_box(rng, height, width) for _ in range(n_boxes)]
    return amap, make_ground_truth(boxes, height, width)


@pytest.fixture
def rng() -> np.random.Generator:
    return make_rng(1234)
