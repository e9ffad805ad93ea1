"""Instance evaluation, aggregation, table rendering, and histogram output."""

from __future__ import annotations

import json
import math
import warnings
from dataclasses import dataclass
from decimal import ROUND_HALF_UP, Decimal
from pathlib import Path

import numpy as np

from . import metrics as m
from . import pointing as pg
from .core import (
    ActivationMap,
    GroundTruth,
    InstanceMetrics,
    MetricConfig,
    check_same_shape,
    make_ground_truth,
)
from .errors import (
    DegenerateMapWarning,
    EmptyGroup,
    GroundevalError,
    OutOfRange,
    UnknownMetric,
)
from .ingest import GroundingInstance, load_map

HISTOGRAM_METRICS_DEFAULT = ("iou_soft", "io_ratio")

# Aggregation direction per column: True = higher is better.
METRIC_DIRECTION_UP = {
    "mean_iou_soft": True,
    "mean_iou_binary": True,
    "mean_dice_soft": True,
    "mean_dice_binary": True,
    "mean_wdp_soft": False,
    "mean_wdp_binary": False,
    "mean_io_ratio": True,
    "pg_accuracy_percent": True,
    "pg_uncertain_count": False,
}

CSV_HEADER = (
    "Dataset,Split,Setting,Model,IoU_Soft,IoU_Binary,Dice_Soft,Dice_Binary,"
    "WDP_Soft,WDP_Binary,IO_ratio_LogSig,PG_Accuracy,PG_Uncertainty"
)


def evaluate_map(amap: ActivationMap, gt: GroundTruth,
                 cfg: MetricConfig) -> InstanceMetrics:
    """Compute all scalar metrics plus pointing-game results in one pass.

    Soft metrics use the raw map; binary metrics use the thresholded map
    (the threshold applies to both numerator and denominator of WDP_binary).
    This is the batch hot path, so the shared sums are computed once
    instead of going through the single-metric functions.
    """
    check_same_shape(amap, gt)
    values = amap.values
    mask = gt.mask
    flat_values = values.ravel()
    flat_mask = mask.ravel()

    dmap = m.distance_map(gt, amap.height, amap.width)
    outside_weight = ((1.0 - mask) * dmap).ravel()   # (1 - M) * D, shared

    a_soft = float(np.sum(flat_values))
    m_sum = float(np.sum(flat_mask))
    inter_soft = float(np.dot(flat_values, flat_mask))
    p_soft = float(np.dot(flat_values, outside_weight))

    binary = flat_values > cfg.binarize_threshold
    a_binary = float(np.count_nonzero(binary))
    inter_binary = float(np.count_nonzero(binary & (flat_mask > 0.0)))
    p_binary = float(np.sum(outside_weight, where=binary))

    def ratio(x: float, y: float) -> float:
        return x / y if y > 0.0 else 0.0

    if a_soft == 0.0:
        warnings.warn(
            "activation map has zero total mass; io_ratio set to 0",
            DegenerateMapWarning,
            stacklevel=2,
        )

    argmax = pg.global_argmax(amap)
    kept = pg.kept_peaks(amap, cfg)
    report = pg.uncertainty_from_kept(kept, mask, cfg.tie_tolerance)

    return InstanceMetrics(
        iou_soft=ratio(inter_soft, a_soft + m_sum - inter_soft),
        iou_binary=ratio(inter_binary, a_binary + m_sum - inter_binary),
        dice_soft=ratio(2.0 * inter_soft, a_soft + m_sum),
        dice_binary=ratio(2.0 * inter_binary, a_binary + m_sum),
        wdp_soft=p_soft / (p_soft + a_soft + cfg.epsilon),
        wdp_binary=p_binary / (p_binary + a_binary + cfg.epsilon),
        io_ratio=ratio(inter_soft, a_soft),
        pg_hit=int(mask[argmax] > 0.0),
        pg_uncertain=report.uncertain,
        argmax_coord=argmax,
        nms_maxima=tuple((p.value, p.row, p.col) for p in report.tied_peaks),
        degenerate_map=a_soft == 0.0,
    )


def evaluate_instance(inst: GroundingInstance,
                      cfg: MetricConfig) -> InstanceMetrics:
    """Load one manifest instance and evaluate it."""
    try:
        amap = load_map(inst.map_path)
        gt = make_ground_truth(inst.boxes, amap.height, amap.width)
        return evaluate_map(amap, gt, cfg)
    except GroundevalError as exc:
        raise type(exc)(f"instance {inst.id!r}: {exc}") from exc


def make_record(inst: GroundingInstance, result: InstanceMetrics) -> dict:
    """Flat JSON-serializable per-instance record."""
    record = {
        "id": inst.id,
        "dataset": inst.dataset,
        "split": inst.split,
        "setting": inst.setting,
        "model": inst.model,
    }
    record.update(result.scalars())
    record.update(
        pg_hit=result.pg_hit,
        pg_uncertain=result.pg_uncertain,
        argmax_coord=list(result.argmax_coord),
        nms_maxima=[[v, r, c] for v, r, c in result.nms_maxima],
        degenerate_map=result.degenerate_map,
    )
    return record


@dataclass(frozen=True)
class SummaryRow:
    dataset: str
    split: str
    setting: str
    model: str
    mean_iou_soft: float
    mean_iou_binary: float
    mean_dice_soft: float
    mean_dice_binary: float
    mean_wdp_soft: float
    mean_wdp_binary: float
    mean_io_ratio: float
    pg_accuracy_percent: float
    pg_uncertain_count: int
    total: int


GROUP_KEY_FIELDS = ("dataset", "split", "setting", "model")


def aggregate(results: list[InstanceMetrics],
              key: tuple[str, str, str, str]) -> SummaryRow:
    """Arithmetic means over one (dataset, split, setting, model) group.

    Uses exact compensated summation so the result is independent of the
    order instances were evaluated in.
    """
    if not results:
        raise EmptyGroup(f"group {key} has no instances")
    n = len(results)
    means = {
        name: math.fsum(getattr(r, name) for r in results) / n
        for name in InstanceMetrics.SCALAR_FIELDS
    }
    hits = sum(r.pg_hit for r in results)
    return SummaryRow(
        dataset=key[0], split=key[1], setting=key[2], model=key[3],
        mean_iou_soft=means["iou_soft"],
        mean_iou_binary=means["iou_binary"],
        mean_dice_soft=means["dice_soft"],
        mean_dice_binary=means["dice_binary"],
        mean_wdp_soft=means["wdp_soft"],
        mean_wdp_binary=means["wdp_binary"],
        mean_io_ratio=means["io_ratio"],
        pg_accuracy_percent=100.0 * hits / n,
        pg_uncertain_count=sum(1 for r in results if r.pg_uncertain),
        total=n,
    )


def aggregate_all(records: list[tuple[GroundingInstance, InstanceMetrics]]) -> list[SummaryRow]:
    """Group by (dataset, split, setting, model) in first-seen manifest order."""
    groups: dict[tuple[str, str, str, str], list[InstanceMetrics]] = {}
    for inst, result in records:
        key = (inst.dataset, inst.split, inst.setting, inst.model)
        groups.setdefault(key, []).append(result)
    return [aggregate(results, key) for key, results in groups.items()]


def format_mean(x: float) -> str:
    """Two decimals, half-up."""
    return str(Decimal(repr(x)).quantize(Decimal("0.01"), rounding=ROUND_HALF_UP))


def format_uncertainty(count: int, total: int) -> str:
    return f"{count} / {total}"


_ROW_CELLS = (
    ("mean_iou_soft", format_mean),
    ("mean_iou_binary", format_mean),
    ("mean_dice_soft", format_mean),
    ("mean_dice_binary", format_mean),
    ("mean_wdp_soft", format_mean),
    ("mean_wdp_binary", format_mean),
    ("mean_io_ratio", format_mean),
    ("pg_accuracy_percent", format_mean),
)


def _rank_styles(rows: list[SummaryRow]) -> dict[tuple[int, str], str]:
    """Best/second-best per metric within each (dataset, split, setting).

    Returns {(row_index, field): "best" | "second"}; ties share a rank.
    """
    styles: dict[tuple[int, str], str] = {}
    settings: dict[tuple[str, str, str], list[int]] = {}
    for idx, row in enumerate(rows):
        settings.setdefault((row.dataset, row.split, row.setting), []).append(idx)
    for indices in settings.values():
        if len(indices) < 2:
            continue
        for field, higher_better in METRIC_DIRECTION_UP.items():
            values = [getattr(rows[i], field) for i in indices]
            distinct = sorted(set(values), reverse=higher_better)
            for i, value in zip(indices, values):
                if value == distinct[0]:
                    styles[(i, field)] = "best"
                elif len(distinct) > 1 and value == distinct[1]:
                    styles[(i, field)] = "second"
    return styles


def _styled(text: str, style: str | None) -> str:
    if style == "best":
        return f"**{text}**"
    if style == "second":
        return f"<u>{text}</u>"
    return text


def render_table(rows: list[SummaryRow], fmt: str = "markdown") -> str:
    """Render summary rows in Table-1 column order.

    Formats: markdown (with best/second-best highlighting), csv, structured
    (JSON). Means and accuracy print with two decimals, half-up;
    uncertainty prints as "count / total".
    """
    if not rows:
        raise EmptyGroup("no summary rows to render")
    if fmt == "csv":
        lines = [CSV_HEADER]
        for row in rows:
            cells = [row.dataset, row.split, row.setting, row.model]
            cells += [formatter(getattr(row, field)) for field, formatter in _ROW_CELLS]
            cells.append(format_uncertainty(row.pg_uncertain_count, row.total))
            lines.append(",".join(cells))
        return "\n".join(lines) + "\n"
    if fmt == "structured":
        payload = [row.__dict__ for row in rows]
        return json.dumps(payload, indent=2) + "\n"
    if fmt == "markdown":
        header = CSV_HEADER.split(",")
        lines = ["| " + " | ".join(header) + " |",
                 "|" + "---|" * len(header)]
        styles = _rank_styles(rows)
        for idx, row in enumerate(rows):
            cells = [row.dataset, row.split, row.setting, row.model]
            for field, formatter in _ROW_CELLS:
                cells.append(_styled(formatter(getattr(row, field)),
                                     styles.get((idx, field))))
            cells.append(_styled(
                format_uncertainty(row.pg_uncertain_count, row.total),
                styles.get((idx, "pg_uncertain_count"))))
            lines.append("| " + " | ".join(cells) + " |")
        return "\n".join(lines) + "\n"
    raise ValueError(f"unknown table format {fmt!r}")


@dataclass(frozen=True)
class HistogramSpec:
    metric: str
    bin_edges: tuple[float, ...]   # bins + 1 edges spanning [0, 1]
    counts: tuple[int, ...]


def histogram(values: list[float], bins: int = 20,
              metric: str = "") -> HistogramSpec:
    """Uniform bins over [0, 1]; the last bin is closed on the right."""
    arr = np.asarray(values, dtype=np.float64)
    if arr.size and (arr.min() < 0.0 or arr.max() > 1.0):
        raise OutOfRange("histogram values must lie in [0, 1]")
    edges = np.linspace(0.0, 1.0, bins + 1)
    counts, _ = np.histogram(arr, bins=edges)
    return HistogramSpec(metric=metric,
                         bin_edges=tuple(float(e) for e in edges),
                         counts=tuple(int(c) for c in counts))


def histogram_csv(spec: HistogramSpec) -> str:
    lines = ["bin_left,bin_right,count"]
    for left, right, count in zip(spec.bin_edges[:-1], spec.bin_edges[1:], spec.counts):
        lines.append(f"{left},{right},{count}")
    return "\n".join(lines) + "\n"


def histogram_svg(spec: HistogramSpec, width: int = 640, height: int = 320) -> str:
    """Minimal standalone SVG bar chart for one histogram."""
    margin = 40
    plot_w = width - 2 * margin
    plot_h = height - 2 * margin
    peak = max(max(spec.counts), 1)
    nbins = len(spec.counts)
    bars = []
    for k, count in enumerate(spec.counts):
        bar_h = plot_h * count / peak
        x = margin + plot_w * k / nbins
        y = height - margin - bar_h
        bars.append(
            f'<rect x="{x:.1f}" y="{y:.1f}" width="{plot_w / nbins:.1f}" '
            f'height="{bar_h:.1f}" fill="steelblue" stroke="white"/>'
        )
    title = spec.metric or "histogram"
    return (
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}">\n'
        f'<text x="{width / 2}" y="20" text-anchor="middle">{title}</text>\n'
        + "\n".join(bars)
        + f'\n<line x1="{margin}" y1="{height - margin}" x2="{width - margin}" '
        f'y2="{height - margin}" stroke="black"/>\n</svg>\n'
    )


def group_histograms(records: list[dict], metric: str, bins: int = 20,
                     group_fields: tuple[str, ...] = ("dataset", "model")) -> dict[str, HistogramSpec]:
    """Per-group histograms over one metric of the flat records."""
    if records and metric not in records[0]:
        raise UnknownMetric(f"records carry no metric {metric!r}")
    if metric not in InstanceMetrics.SCALAR_FIELDS:
        raise UnknownMetric(f"{metric!r} is not a histogram metric")
    grouped: dict[str, list[float]] = {}
    for record in records:
        label = "__".join(str(record[f]) for f in group_fields)
        grouped.setdefault(label, []).append(float(record[metric]))
    return {
        label: histogram(values, bins=bins, metric=metric)
        for label, values in grouped.items()
    }


def write_outputs(records: list[dict], rows: list[SummaryRow],
                  hists: dict[str, dict[str, HistogramSpec]],
                  out_dir: str | Path, svg: bool = False) -> list[Path]:
    """Write the full report file set; returns the created paths."""
    if not records or not rows:
        raise EmptyGroup("nothing to write: no evaluated instances")
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    written: list[Path] = []

    def emit(name: str, text: str) -> None:
        path = out_dir / name
        path.write_text(text, encoding="utf-8")
        written.append(path)

    emit("instances.records",
         "".join(json.dumps(record) + "\n" for record in records))
    emit("summary.md", render_table(rows, "markdown"))
    emit("summary.csv", render_table(rows, "csv"))
    emit("summary.structured", render_table(rows, "structured"))
    for metric, by_group in hists.items():
        single = len(by_group) == 1
        for label, spec in by_group.items():
            stem = f"hist_{metric}" if single else f"hist_{metric}__{label}"
            emit(f"{stem}.csv", histogram_csv(spec))
            if svg:
                emit(f"{stem}.svg", histogram_svg(spec))
    return written
