"""Command-line front end: validate, eval, hist, gen-fixtures.

Exit codes: 0 success, 1 data/validation failure, 2 I/O failure.
"""

from __future__ import annotations

import argparse
import json
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict
from pathlib import Path

import numpy as np

from .core import BoundingBox, InstanceMetrics, MetricConfig
from .errors import GroundevalError
from .fixtures import BlobSpec, gaussian_map, scenario1_fixture, scenario2_fixtures
from .ingest import (
    GroundingInstance,
    load_manifest,
    validate_instance,
    write_manifest,
    write_map,
)
from .report import (
    HISTOGRAM_METRICS_DEFAULT,
    aggregate_all,
    evaluate_instance,
    group_histograms,
    histogram_csv,
    histogram_svg,
    make_record,
    render_table,
    write_outputs,
)

EXIT_OK = 0
EXIT_DATA = 1
EXIT_IO = 2


def _add_config_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", type=Path, default=None,
                        help="JSON file with MetricConfig overrides")
    parser.add_argument("--threshold", type=float, default=None,
                        help="binarization threshold (default 0.5)")
    parser.add_argument("--tau", type=float, default=None,
                        help="local-maxima activation threshold (default 0.7)")
    parser.add_argument("--delta", type=float, default=None,
                        help="NMS suppression radius in pixels (default 50)")
    parser.add_argument("--epsilon", type=float, default=None,
                        help="ratio-denominator guard (default 1e-8)")
    parser.add_argument("--tie-tol", type=float, default=None,
                        help="equal-activation tie tolerance (default 1e-6)")


_FLAG_TO_FIELD = {
    "threshold": "binarize_threshold",
    "tau": "maxima_threshold",
    "delta": "nms_radius",
    "epsilon": "epsilon",
    "tie_tol": "tie_tolerance",
}


def resolve_config(args: argparse.Namespace) -> MetricConfig:
    """CLI flag > config file > built-in defaults."""
    resolved = asdict(MetricConfig())
    if getattr(args, "config", None):
        file_cfg = json.loads(Path(args.config).read_text(encoding="utf-8"))
        unknown = set(file_cfg) - set(resolved)
        if unknown:
            raise GroundevalError(f"unknown config keys: {sorted(unknown)}")
        resolved.update(file_cfg)
    for flag, field in _FLAG_TO_FIELD.items():
        value = getattr(args, flag, None)
        if value is not None:
            resolved[field] = value
    return MetricConfig(**resolved)


def cmd_validate(args: argparse.Namespace) -> int:
    try:
        instances = load_manifest(args.manifest)
    except OSError as exc:
        print(f"error: cannot read manifest: {exc}", file=sys.stderr)
        return EXIT_IO
    except GroundevalError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA
    failures = 0
    for inst in instances:
        try:
            validate_instance(inst)
        except GroundevalError as exc:
            failures += 1
            print(f"{inst.id}: {type(exc).__name__}: {exc}", file=sys.stderr)
    print(f"{len(instances) - failures}/{len(instances)} instances valid")
    return EXIT_OK if failures == 0 else EXIT_DATA


def _eval_one(task: tuple[GroundingInstance, MetricConfig]) -> InstanceMetrics:
    inst, cfg = task
    return evaluate_instance(inst, cfg)


def evaluate_manifest(instances: list[GroundingInstance], cfg: MetricConfig,
                      workers: int = 1) -> list[InstanceMetrics]:
    """Batch-parallel evaluation; results always in manifest order."""
    tasks = [(inst, cfg) for inst in instances]
    if workers <= 1:
        return [_eval_one(task) for task in tasks]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        chunk = max(1, len(tasks) // (workers * 8))
        return list(pool.map(_eval_one, tasks, chunksize=chunk))


def cmd_eval(args: argparse.Namespace) -> int:
    try:
        cfg = resolve_config(args)
        instances = load_manifest(args.manifest)
    except OSError as exc:
        print(f"error: cannot read manifest: {exc}", file=sys.stderr)
        return EXIT_IO
    except GroundevalError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA
    if not instances:
        print("error: EmptyGroup: manifest has no instances", file=sys.stderr)
        return EXIT_DATA

    written: list[Path] = []
    try:
        results = evaluate_manifest(instances, cfg, workers=args.workers)
        pairs = list(zip(instances, results))
        records = [make_record(inst, res) for inst, res in pairs]
        rows = aggregate_all(pairs)
        hists = {
            metric: group_histograms(records, metric, bins=args.bins)
            for metric in args.hist_metrics
        }
        written = write_outputs(records, rows, hists, args.out, svg=args.svg)
        config_path = Path(args.out) / "config.json"
        config_path.write_text(json.dumps(asdict(cfg), indent=2) + "\n",
                               encoding="utf-8")
        written.append(config_path)
    except GroundevalError as exc:
        for path in written:
            path.unlink(missing_ok=True)
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_DATA
    except OSError as exc:
        for path in written:
            path.unlink(missing_ok=True)
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    print(render_table(rows, args.format), end="")
    return EXIT_OK


def cmd_hist(args: argparse.Namespace) -> int:
    try:
        records = [
            json.loads(line)
            for line in Path(args.records).read_text(encoding="utf-8").splitlines()
            if line.strip()
        ]
        hists = group_histograms(records, args.metric, bins=args.bins)
    except OSError as exc:
        print(f"error: cannot read records: {exc}", file=sys.stderr)
        return EXIT_IO
    except GroundevalError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_DATA
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    single = len(hists) == 1
    for label, spec in hists.items():
        stem = f"hist_{args.metric}" if single else f"hist_{args.metric}__{label}"
        (out_dir / f"{stem}.csv").write_text(histogram_csv(spec), encoding="utf-8")
        if args.svg:
            (out_dir / f"{stem}.svg").write_text(histogram_svg(spec), encoding="utf-8")
    print(f"wrote {len(hists)} histogram(s) to {out_dir}")
    return EXIT_OK


def _parse_box(text: str) -> BoundingBox:
    parts = [int(p) for p in text.split(",")]
    if len(parts) != 4:
        raise ValueError("box must be y0,x0,y1,x1")
    return BoundingBox(*parts)


def _fixture_instance(idx: int, map_path: Path, box: BoundingBox,
                      prompt: str, out_dir: Path) -> GroundingInstance:
    return GroundingInstance(
        id=f"fixture-{idx:05d}",
        map_path=map_path,
        boxes=(box,),
        prompt=prompt,
        dataset="synthetic",
        split="test",
        setting="phrase",
        model="fixture",
    )


def cmd_gen_fixtures(args: argparse.Namespace) -> int:
    out_dir = Path(args.out)
    height, width = args.height, args.width
    try:
        out_dir.mkdir(parents=True, exist_ok=True)
        box = _parse_box(args.box)
        instances = []
        if args.kind == "scenario1":
            amap = scenario1_fixture(height, width, box, delta=args.delta or 50.0)
            path = out_dir / "scenario1.npy"
            write_map(amap, path)
            instances.append(_fixture_instance(0, path, box, "scenario1 mixed ties", out_dir))
        elif args.kind == "scenario2":
            masses = [float(s) for s in args.masses.split(",")]
            maps = scenario2_fixtures(height, width, box, masses)
            for idx, (amap, mass) in enumerate(zip(maps, masses)):
                path = out_dir / f"scenario2_{idx}.npy"
                write_map(amap, path)
                instances.append(_fixture_instance(
                    idx, path, box, f"scenario2 outside mass {mass}", out_dir))
        elif args.kind == "random":
            rng = np.random.Generator(np.random.Philox(args.seed))
            for idx in range(args.n):
                y0 = int(rng.integers(0, height - 1))
                x0 = int(rng.integers(0, width - 1))
                y1 = int(rng.integers(y0 + 1, height + 1))
                x1 = int(rng.integers(x0 + 1, width + 1))
                inst_box = BoundingBox(y0, x0, y1, x1)
                blobs = [
                    BlobSpec(center=(int(rng.integers(0, height)),
                                     int(rng.integers(0, width))),
                             sigma=float(rng.uniform(2.0, max(height, width) / 4)),
                             amplitude=float(rng.uniform(0.3, 1.0)))
                    for _ in range(int(rng.integers(1, 4)))
                ]
                amap = gaussian_map(height, width, blobs, noise=0.05,
                                    seed=args.seed * 100003 + idx)
                path = out_dir / f"random_{idx:05d}.npy"
                write_map(amap, path)
                instances.append(_fixture_instance(
                    idx, path, inst_box, f"random fixture {idx}", out_dir))
        else:
            print(f"error: unknown fixture kind {args.kind!r}", file=sys.stderr)
            return EXIT_DATA
        write_manifest(instances, out_dir / "manifest.jsonl")
    except (GroundevalError, ValueError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_DATA
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    print(f"wrote {len(instances)} fixture instance(s) to {out_dir}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="groundeval",
        description="GradCAM grounding metrics over activation maps and boxes",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_val = sub.add_parser("validate", help="check a manifest and its maps")
    p_val.add_argument("--manifest", type=Path, required=True)
    p_val.set_defaults(func=cmd_validate)

    p_eval = sub.add_parser("eval", help="evaluate a manifest end to end")
    p_eval.add_argument("--manifest", type=Path, required=True)
    p_eval.add_argument("--out", type=Path, required=True)
    p_eval.add_argument("--workers", type=int, default=1)
    p_eval.add_argument("--bins", type=int, default=20)
    p_eval.add_argument("--format", choices=("markdown", "csv", "structured"),
                        default="markdown")
    p_eval.add_argument("--svg", action="store_true")
    p_eval.add_argument("--hist-metrics", nargs="+",
                        default=list(HISTOGRAM_METRICS_DEFAULT),
                        choices=list(InstanceMetrics.SCALAR_FIELDS))
    _add_config_flags(p_eval)
    p_eval.set_defaults(func=cmd_eval)

    p_hist = sub.add_parser("hist", help="histogram a metric from a records file")
    p_hist.add_argument("--records", type=Path, required=True)
    p_hist.add_argument("--metric", required=True)
    p_hist.add_argument("--bins", type=int, default=20)
    p_hist.add_argument("--out", type=Path, required=True)
    p_hist.add_argument("--svg", action="store_true")
    p_hist.set_defaults(func=cmd_hist)

    p_gen = sub.add_parser("gen-fixtures", help="write synthetic fixture datasets")
    p_gen.add_argument("kind", choices=("scenario1", "scenario2", "random"))
    p_gen.add_argument("--out", type=Path, required=True)
    p_gen.add_argument("--height", type=int, default=224)
    p_gen.add_argument("--width", type=int, default=224)
    p_gen.add_argument("--box", default="80,80,140,140",
                       help="y0,x0,y1,x1 for scenario fixtures")
    p_gen.add_argument("--masses", default="0,1,2,3",
                       help="scenario2 outside masses, comma separated")
    p_gen.add_argument("--n", type=int, default=10,
                       help="number of random fixtures")
    p_gen.add_argument("--seed", type=int, default=0)
    p_gen.add_argument("--delta", type=float, default=None)
    p_gen.set_defaults(func=cmd_gen_fixtures)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    raise SystemExit(main())
