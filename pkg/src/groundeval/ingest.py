"""Dataset ingestion: JSONL manifests plus per-instance activation-map files.

Manifest wire format: UTF-8, one JSON object per line with fields
id, map_path (relative to the manifest directory), boxes (list of
[y0, x0, y1, x1] integers), prompt, dataset, split, setting, model.

Map files: NPY v1/v2 holding a 2D float32/float64 C-order array, or a
plain-text grid ("H W" on the first line, then H rows of W values).
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .core import ActivationMap, BoundingBox, make_ground_truth
from .errors import (
    DuplicateId,
    EmptyBoxList,
    GroundevalError,
    MapLoadError,
    MissingField,
    NotTwoDimensional,
    ParseError,
    UnsupportedDtype,
    UnsupportedFormat,
)

SETTINGS = ("phrase", "referring", "triplet", "subject", "object")

MANIFEST_FIELDS = ("id", "map_path", "boxes", "prompt", "dataset",
                   "split", "setting", "model")


@dataclass(frozen=True)
class GroundingInstance:
    id: str
    map_path: Path
    boxes: tuple[BoundingBox, ...]
    prompt: str
    dataset: str
    split: str
    setting: str
    model: str

    def __post_init__(self) -> None:
        if self.setting not in SETTINGS:
            raise ParseError(
                f"instance {self.id!r}: setting {self.setting!r} "
                f"not one of {SETTINGS}"
            )
        if not self.boxes:
            raise EmptyBoxList(f"instance {self.id!r} has no boxes")


def _instance_from_record(record: dict, base_dir: Path, line_no: int) -> GroundingInstance:
    for field_name in MANIFEST_FIELDS:
        if field_name not in record:
            raise MissingField(f"line {line_no}: missing field {field_name!r}")
    try:
        boxes = tuple(BoundingBox(*map(int, b)) for b in record["boxes"])
    except (TypeError, ValueError) as exc:
        raise ParseError(f"line {line_no}: malformed boxes: {exc}") from exc
    return GroundingInstance(
        id=str(record["id"]),
        map_path=base_dir / record["map_path"],
        boxes=boxes,
        prompt=str(record["prompt"]),
        dataset=str(record["dataset"]),
        split=str(record["split"]),
        setting=str(record["setting"]),
        model=str(record["model"]),
    )


def iter_manifest(path: str | Path):
    """Stream instances from a JSONL manifest, preserving file order."""
    path = Path(path)
    base_dir = path.parent
    seen: set[str] = set()
    with path.open(encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                record = json.loads(line)
            except json.JSONDecodeError as exc:
                raise ParseError(f"line {line_no}: invalid JSON: {exc}") from exc
            if not isinstance(record, dict):
                raise ParseError(f"line {line_no}: record is not an object")
            inst = _instance_from_record(record, base_dir, line_no)
            if inst.id in seen:
                raise DuplicateId(f"line {line_no}: duplicate id {inst.id!r}")
            seen.add(inst.id)
            yield inst


def load_manifest(path: str | Path) -> list[GroundingInstance]:
    return list(iter_manifest(path))


def write_manifest(instances, path: str | Path) -> None:
    """Write instances as JSONL; map_path stored relative to the manifest dir."""
    path = Path(path)
    base_dir = path.parent
    with path.open("w", encoding="utf-8") as fh:
        for inst in instances:
            map_path = Path(inst.map_path)
            try:
                rel = map_path.relative_to(base_dir)
            except ValueError:
                rel = map_path
            record = {
                "id": inst.id,
                "map_path": str(rel),
                "boxes": [list(b.as_tuple()) for b in inst.boxes],
                "prompt": inst.prompt,
                "dataset": inst.dataset,
                "split": inst.split,
                "setting": inst.setting,
                "model": inst.model,
            }
            fh.write(json.dumps(record) + "\n")


def _load_npy(path: Path) -> np.ndarray:
    try:
        arr = np.load(path, allow_pickle=False)
    except ValueError as exc:
        raise UnsupportedFormat(f"{path}: not a readable NPY file: {exc}") from exc
    if arr.dtype not in (np.float32, np.float64):
        raise UnsupportedDtype(f"{path}: dtype {arr.dtype} not in (float32, float64)")
    return arr


def _load_text_grid(path: Path) -> np.ndarray:
    with path.open(encoding="utf-8") as fh:
        header = fh.readline().split()
        if len(header) != 2:
            raise UnsupportedFormat(f"{path}: text grid header must be 'H W'")
        try:
            height, width = int(header[0]), int(header[1])
        except ValueError as exc:
            raise UnsupportedFormat(f"{path}: bad text grid header: {exc}") from exc
        try:
            arr = np.loadtxt(fh, dtype=np.float64, ndmin=2)
        except ValueError as exc:
            raise UnsupportedFormat(f"{path}: bad text grid body: {exc}") from exc
    if arr.shape != (height, width):
        raise UnsupportedFormat(
            f"{path}: header says {height}x{width}, body is {arr.shape}"
        )
    return arr


def load_map(path: str | Path) -> ActivationMap:
    """Load and validate an activation map from NPY or the text grid format."""
    path = Path(path)
    if not path.is_file():
        raise MapLoadError(f"{path}: no such file")
    if path.suffix == ".npy":
        arr = _load_npy(path)
    elif path.suffix in (".txt", ".grid"):
        arr = _load_text_grid(path)
    else:
        raise UnsupportedFormat(f"{path}: unsupported extension {path.suffix!r}")
    if arr.ndim != 2:
        raise NotTwoDimensional(f"{path}: expected 2D array, got {arr.ndim}D")
    return ActivationMap(arr)


def write_map(amap: ActivationMap, path: str | Path,
              dtype: type = np.float32) -> None:
    """Write a map as NPY. float32 round-trips bit-exactly through load_map."""
    np.save(Path(path), amap.values.astype(dtype))


def validate_instance(inst: GroundingInstance) -> ActivationMap:
    """Load the instance's map and check its boxes fit the map grid.

    Returns the loaded map so callers can keep it; raises on any violation.
    """
    try:
        amap = load_map(inst.map_path)
    except GroundevalError:
        raise
    except OSError as exc:
        raise MapLoadError(f"{inst.map_path}: {exc}") from exc
    make_ground_truth(inst.boxes, amap.height, amap.width)
    return amap
