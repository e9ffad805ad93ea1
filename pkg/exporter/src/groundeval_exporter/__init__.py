"""Producer-side exporter: turn raw saliency maps into evaluator-ready
manifest + NPY datasets."""

from .export import ExportRecord, export_records
from .mock import export_mock_dataset
from .transform import normalize_and_resample, scale_box

__all__ = [
    "ExportRecord",
    "export_records",
    "export_mock_dataset",
    "normalize_and_resample",
    "scale_box",
]

__version__ = "0.1.0"
