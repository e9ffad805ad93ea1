"""End-to-end CLI behavior: subcommands, exit codes, determinism."""

from __future__ import annotations

import json

import numpy as np
import pytest

from groundeval.cli import main
from groundeval.ingest import write_manifest


def run(*argv) -> int:
    return main([str(a) for a in argv])


@pytest.fixture
def scenario2_dir(tmp_path):
    out = tmp_path / "s2"
    assert run("gen-fixtures", "scenario2", "--out", out) == 0
    return out


class TestGenFixtures:
    def test_scenario1_pipeline(self, tmp_path):
        fix_dir = tmp_path / "s1"
        assert run("gen-fixtures", "scenario1", "--out", fix_dir) == 0
        manifest = fix_dir / "manifest.jsonl"
        assert run("validate", "--manifest", manifest) == 0
        out_dir = tmp_path / "run"
        assert run("eval", "--manifest", manifest, "--out", out_dir,
                   "--format", "csv") == 0
        summary = (out_dir / "summary.csv").read_text()
        assert "1 / 1" in summary

    def test_scenario2_four_instances(self, scenario2_dir):
        lines = (scenario2_dir / "manifest.jsonl").read_text().strip().splitlines()
        assert len(lines) == 4

    def test_random_reproducible(self, tmp_path):
        a, b = tmp_path / "a", tmp_path / "b"
        assert run("gen-fixtures", "random", "--n", 3, "--seed", 9, "--out", a) == 0
        assert run("gen-fixtures", "random", "--n", 3, "--seed", 9, "--out", b) == 0
        for name in sorted(p.name for p in a.iterdir()):
            assert (a / name).read_bytes() == (b / name).read_bytes()


class TestValidate:
    def test_bad_box_exits_one(self, tmp_path, capsys):
        maps_dir = tmp_path
        np.save(maps_dir / "m.npy", np.zeros((4, 4), dtype=np.float32))
        manifest = maps_dir / "manifest.jsonl"
        record = {"id": "a", "map_path": "m.npy", "boxes": [[0, 0, 9, 9]],
                  "prompt": "", "dataset": "d", "split": "s",
                  "setting": "phrase", "model": "m"}
        manifest.write_text(json.dumps(record) + "\n")
        assert run("validate", "--manifest", manifest) == 1
        assert "BoxOutOfBounds" in capsys.readouterr().err

    def test_missing_manifest_exits_two(self, tmp_path):
        assert run("validate", "--manifest", tmp_path / "nope.jsonl") == 2


class TestEval:
    def test_scenario2_distinct_io_ratios(self, scenario2_dir, tmp_path):
        out_dir = tmp_path / "run"
        assert run("eval", "--manifest", scenario2_dir / "manifest.jsonl",
                   "--out", out_dir, "--format", "csv") == 0
        records = [json.loads(line) for line in
                   (out_dir / "instances.records").read_text().splitlines()]
        ratios = [r["io_ratio"] for r in records]
        assert len(set(ratios)) == 4
        assert all(r["pg_hit"] == 1 for r in records)
        assert "100.00" in (out_dir / "summary.csv").read_text()

    def test_resolved_config_echoed(self, scenario2_dir, tmp_path):
        out_dir = tmp_path / "run"
        assert run("eval", "--manifest", scenario2_dir / "manifest.jsonl",
                   "--out", out_dir, "--tau", 0.6) == 0
        cfg = json.loads((out_dir / "config.json").read_text())
        assert cfg["maxima_threshold"] == 0.6
        assert cfg["binarize_threshold"] == 0.5

    def test_config_file_precedence(self, scenario2_dir, tmp_path):
        cfg_file = tmp_path / "cfg.json"
        cfg_file.write_text(json.dumps({"nms_radius": 30.0,
                                        "maxima_threshold": 0.8}))
        out_dir = tmp_path / "run"
        assert run("eval", "--manifest", scenario2_dir / "manifest.jsonl",
                   "--out", out_dir, "--config", cfg_file, "--tau", 0.75) == 0
        cfg = json.loads((out_dir / "config.json").read_text())
        assert cfg["nms_radius"] == 30.0      # from file
        assert cfg["maxima_threshold"] == 0.75  # flag beats file

    def test_empty_manifest_exits_one(self, tmp_path):
        manifest = tmp_path / "empty.jsonl"
        manifest.write_text("")
        assert run("eval", "--manifest", manifest, "--out", tmp_path / "o") == 1

    def test_workers_do_not_change_bytes(self, tmp_path):
        fix_dir = tmp_path / "fix"
        assert run("gen-fixtures", "random", "--n", 12, "--seed", 5,
                   "--height", 64, "--width", 64, "--out", fix_dir) == 0
        out1, out8 = tmp_path / "w1", tmp_path / "w8"
        assert run("eval", "--manifest", fix_dir / "manifest.jsonl",
                   "--out", out1, "--workers", 1) == 0
        assert run("eval", "--manifest", fix_dir / "manifest.jsonl",
                   "--out", out8, "--workers", 8) == 0
        for name in ("summary.csv", "instances.records"):
            assert (out1 / name).read_bytes() == (out8 / name).read_bytes()


class TestHist:
    def test_hist_from_records(self, scenario2_dir, tmp_path):
        run_dir = tmp_path / "run"
        assert run("eval", "--manifest", scenario2_dir / "manifest.jsonl",
                   "--out", run_dir) == 0
        hist_dir = tmp_path / "hist"
        assert run("hist", "--records", run_dir / "instances.records",
                   "--metric", "io_ratio", "--out", hist_dir) == 0
        text = (hist_dir / "hist_io_ratio.csv").read_text()
        assert text.startswith("bin_left,bin_right,count")

    def test_two_groups_two_files(self, tmp_path):
        records = []
        for k, (dataset, model) in enumerate(
                [("d1", "m1"), ("d1", "m1"), ("d2", "m2")]):
            records.append({"id": f"i{k}", "dataset": dataset, "model": model,
                            "split": "s", "setting": "phrase",
                            "io_ratio": 0.3 * (k + 1)})
        path = tmp_path / "instances.records"
        path.write_text("".join(json.dumps(r) + "\n" for r in records))
        hist_dir = tmp_path / "hist"
        assert run("hist", "--records", path, "--metric", "io_ratio",
                   "--out", hist_dir) == 0
        assert len(list(hist_dir.glob("hist_io_ratio__*.csv"))) == 2

    def test_unknown_metric(self, scenario2_dir, tmp_path):
        run_dir = tmp_path / "run"
        assert run("eval", "--manifest", scenario2_dir / "manifest.jsonl",
                   "--out", run_dir) == 0
        assert run("hist", "--records", run_dir / "instances.records",
                   "--metric", "foo", "--out", tmp_path / "h") == 1
