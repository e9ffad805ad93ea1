"""Quantitative grounding evaluation for GradCAM-style activation maps."""

from .core import (
    ActivationMap,
    BoundingBox,
    GroundTruth,
    InstanceMetrics,
    MetricConfig,
    make_ground_truth,
    validate_map,
)
from .metrics import binarize, dice, distance_map, io_ratio, iou, penalty_map, wdp
from .pointing import global_argmax, local_maxima, nms, pg_hit, pg_uncertainty
from .report import aggregate, evaluate_instance, evaluate_map, histogram, render_table

__all__ = [
    "ActivationMap",
    "BoundingBox",
    "GroundTruth",
    "InstanceMetrics",
    "MetricConfig",
    "make_ground_truth",
    "validate_map",
    "binarize",
    "dice",
    "distance_map",
    "io_ratio",
    "iou",
    "penalty_map",
    "wdp",
    "global_argmax",
    "local_maxima",
    "nms",
    "pg_hit",
    "pg_uncertainty",
    "aggregate",
    "evaluate_instance",
    "evaluate_map",
    "histogram",
    "render_table",
]

__version__ = "0.1.0"
