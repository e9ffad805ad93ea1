"""Cross-component conformance: the exporter's output must be accepted by
the evaluation toolkit through its public CLI, with warnings escalated to
errors. The toolkit is exercised strictly as an installed external tool."""

import shutil
import subprocess
import sys

import pytest

from groundeval_exporter.cli import main as export_cli
from groundeval_exporter.mock import export_mock_dataset

pytestmark = pytest.mark.skipif(
    shutil.which("groundeval") is None,
    reason="evaluation toolkit CLI not installed",
)


def run_toolkit(args, escalate_warnings=True):
    warn_flags = ["-W", "error"] if escalate_warnings else []
    code = ("import sys; from groundeval.cli import main; "
            "sys.exit(main(sys.argv[1:]))")
    return subprocess.run(
        [sys.executable, *warn_flags, "-c", code, *args],
        capture_output=True, text=True,
    )


def test_mock_dataset_validates_and_evaluates(tmp_path):
    manifest = export_mock_dataset(100, 0, tmp_path / "data")

    validated = run_toolkit(["validate", "--manifest", str(manifest)])
    assert validated.returncode == 0, validated.stderr

    evaluated = run_toolkit(["eval", "--manifest", str(manifest),
                             "--out", str(tmp_path / "run")])
    assert evaluated.returncode == 0, evaluated.stderr
    assert (tmp_path / "run" / "summary.csv").is_file()
    assert (tmp_path / "run" / "instances.records").is_file()
    records = (tmp_path / "run" / "instances.records").read_text().splitlines()
    assert len(records) == 100


def test_export_cli_roundtrip(tmp_path):
    out_dir = tmp_path / "cli_data"
    assert export_cli(["export-mock", "--n", "12", "--seed", "3",
                       "--out", str(out_dir)]) == 0
    validated = run_toolkit(["validate", "--manifest",
                             str(out_dir / "manifest.jsonl")])
    assert validated.returncode == 0, validated.stderr


def test_export_cli_rejects_bad_n(tmp_path, capsys):
    assert export_cli(["export-mock", "--n", "0",
                       "--out", str(tmp_path / "x")]) == 1
