"""Batch export of records into the evaluator's wire format.

Wire format (consumed by the evaluation toolkit's `validate` / `eval`
subcommands):
- manifest.jsonl: one JSON object per line with fields id, map_path
  (relative to the manifest directory), boxes (list of [y0, x0, y1, x1]
  integers, half-open, map-grid coordinates), prompt, dataset, split,
  setting, model;
- maps/<id>.npy: 2D float32 C-order arrays with values in [0, 1].
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from numpy.typing import NDArray

from .errors import InvalidParameter, IoError
from .transform import normalize_and_resample, scale_box

# prompt granularities the evaluator accepts
SETTINGS = ("phrase", "referring", "triplet", "subject", "object")

_SAFE_ID = re.compile(r"[^A-Za-z0-9_.-]+")


@dataclass(frozen=True)
class ExportRecord:
    """One saliency map plus its annotations, pre-export.

    `raw_map` is any non-negative H'xW' grid (e.g. a GradCAM at feature
    resolution); `boxes` are half-open (y0, x0, y1, x1) in pixels of the
    `image_size` image. Export resamples the map to `target_size`,
    normalizes it to [0, 1], and rescales the boxes onto the same grid.
    """

    id: str
    raw_map: NDArray[np.floating]
    image_size: tuple[int, int]
    target_size: tuple[int, int]
    boxes: tuple[tuple[int, int, int, int], ...]
    prompt: str
    dataset: str
    split: str
    setting: str
    model: str

    def __post_init__(self) -> None:
        if not self.id:
            raise InvalidParameter("record id must be non-empty")
        if not self.boxes:
            raise InvalidParameter(f"record {self.id!r} has no boxes")
        if self.setting not in SETTINGS:
            raise InvalidParameter(
                f"record {self.id!r}: setting {self.setting!r} not one of {SETTINGS}"
            )


def _map_filename(record_id: str, index: int) -> str:
    stem = _SAFE_ID.sub("_", record_id) or f"record_{index}"
    return f"{stem}.npy"


def export_records(records, out_dir: str | Path) -> Path:
    """Write `records` as manifest.jsonl + maps/*.npy under `out_dir`.

    Returns the manifest path. Map values are stored as float32, which the
    evaluator loads bit-exactly.
    """
    out_dir = Path(out_dir)
    maps_dir = out_dir / "maps"
    try:
        maps_dir.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise IoError(f"cannot create {maps_dir}: {exc}") from exc

    manifest_path = out_dir / "manifest.jsonl"
    seen: set[str] = set()
    try:
        with manifest_path.open("w", encoding="utf-8") as fh:
            for index, record in enumerate(records):
                if record.id in seen:
                    raise InvalidParameter(f"duplicate record id {record.id!r}")
                seen.add(record.id)
                height, width = record.target_size
                grid = normalize_and_resample(record.raw_map, height, width)
                filename = _map_filename(record.id, index)
                np.save(maps_dir / filename, grid.astype(np.float32))
                boxes = [list(scale_box(b, record.image_size, record.target_size))
                         for b in record.boxes]
                fh.write(json.dumps({
                    "id": record.id,
                    "map_path": f"maps/{filename}",
                    "boxes": boxes,
                    "prompt": record.prompt,
                    "dataset": record.dataset,
                    "split": record.split,
                    "setting": record.setting,
                    "model": record.model,
                }) + "\n")
    except OSError as exc:
        raise IoError(f"cannot write under {out_dir}: {exc}") from exc
    return manifest_path
