import json

import numpy as np
import pytest

from groundeval_exporter.errors import InvalidParameter
from groundeval_exporter.export import ExportRecord, export_records
from groundeval_exporter.mock import export_mock_dataset, mock_records

MANIFEST_FIELDS = ("id", "map_path", "boxes", "prompt", "dataset",
                   "split", "setting", "model")


def make_record(idx=0, **overrides):
    rng = np.random.Generator(np.random.Philox(idx))
    defaults = dict(
        id=f"rec-{idx}",
        raw_map=rng.uniform(0.0, 4.0, (7, 7)),
        image_size=(224, 224),
        target_size=(32, 32),
        boxes=((10, 10, 120, 160),),
        prompt="a thing",
        dataset="toy",
        split="val",
        setting="phrase",
        model="unit",
    )
    defaults.update(overrides)
    return ExportRecord(**defaults)


def test_record_validation():
    with pytest.raises(InvalidParameter):
        make_record(id="")
    with pytest.raises(InvalidParameter):
        make_record(boxes=())
    with pytest.raises(InvalidParameter):
        make_record(setting="sentence")


def test_export_writes_manifest_and_maps(tmp_path):
    manifest = export_records([make_record(i) for i in range(3)], tmp_path)
    assert manifest == tmp_path / "manifest.jsonl"
    lines = manifest.read_text().splitlines()
    assert len(lines) == 3
    for line in lines:
        record = json.loads(line)
        assert set(record) == set(MANIFEST_FIELDS)
        map_path = tmp_path / record["map_path"]
        arr = np.load(map_path, allow_pickle=False)
        assert arr.dtype == np.float32
        assert arr.shape == (32, 32)
        assert 0.0 <= arr.min() and arr.max() <= 1.0
        for y0, x0, y1, x1 in record["boxes"]:
            assert 0 <= y0 < y1 <= 32
            assert 0 <= x0 < x1 <= 32


def test_export_rejects_duplicate_ids(tmp_path):
    records = [make_record(0), make_record(1, id="rec-0")]
    with pytest.raises(InvalidParameter):
        export_records(records, tmp_path)


def test_unsafe_ids_become_safe_filenames(tmp_path):
    manifest = export_records([make_record(0, id="a/b c:d")], tmp_path)
    record = json.loads(manifest.read_text())
    assert record["map_path"] == "maps/a_b_c_d.npy"
    assert (tmp_path / record["map_path"]).is_file()


def test_mock_dataset_deterministic(tmp_path):
    m1 = export_mock_dataset(10, 42, tmp_path / "a")
    m2 = export_mock_dataset(10, 42, tmp_path / "b")
    assert m1.read_text() == m2.read_text()
    for line in m1.read_text().splitlines():
        rel = json.loads(line)["map_path"]
        a = np.load(tmp_path / "a" / rel, allow_pickle=False)
        b = np.load(tmp_path / "b" / rel, allow_pickle=False)
        assert np.array_equal(a, b)


def test_mock_dataset_seed_changes_output(tmp_path):
    m1 = export_mock_dataset(5, 1, tmp_path / "a")
    m2 = export_mock_dataset(5, 2, tmp_path / "b")
    assert m1.read_text() != m2.read_text()


def test_mock_rejects_nonpositive_n(tmp_path):
    with pytest.raises(InvalidParameter):
        export_mock_dataset(0, 0, tmp_path)
    with pytest.raises(InvalidParameter):
        mock_records(-3, 0)


def test_mock_covers_every_setting():
    settings_used = {r.setting for r in mock_records(10, 0)}
    assert settings_used == {"phrase", "referring", "triplet", "subject", "object"}
