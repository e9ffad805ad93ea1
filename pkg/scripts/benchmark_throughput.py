#!/usr/bin/env python3
"""Benchmark the batch evaluation path on synthetic 224x224 instances."""

from __future__ import annotations

import argparse
import sys
import tempfile
import time
from pathlib import Path

import numpy as np

from groundeval.cli import evaluate_manifest
from groundeval.core import BoundingBox, MetricConfig
from groundeval.fixtures import BlobSpec, gaussian_map
from groundeval.ingest import GroundingInstance, load_manifest, write_manifest, write_map


def make_rng(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(seed))


def build_manifest(workdir: Path, n: int, size: int, pool: int, seed: int) -> Path:
    rng = make_rng(seed)
    maps_dir = workdir / "maps"
    maps_dir.mkdir()
    paths = []
    for k in range(pool):
        blobs = [BlobSpec((int(rng.integers(0, size)), int(rng.integers(0, size))),
                          float(rng.uniform(2.0, size / 4)),
                          float(rng.uniform(0.5, 1.0)))
                 for _ in range(int(rng.integers(1, 4)))]
        path = maps_dir / f"pool_{k:03d}.npy"
        write_map(gaussian_map(size, size, blobs, noise=0.05, seed=seed + k), path)
        paths.append(path)
    instances = []
    for idx in range(n):
        y0 = int(rng.integers(0, size - 8)); x0 = int(rng.integers(0, size - 8))
        box = BoundingBox(y0, x0, int(rng.integers(y0 + 4, size + 1)),
                          int(rng.integers(x0 + 4, size + 1)))
        instances.append(GroundingInstance(
            id=f"bench-{idx:06d}", map_path=paths[idx % pool], boxes=(box,),
            prompt="", dataset="bench", split="test", setting="phrase",
            model="bench"))
    manifest = workdir / "manifest.jsonl"
    write_manifest(instances, manifest)
    return manifest


def main() -> int:
    parser = argparse.ArgumentParser()
    parser.add_argument("--n", type=int, default=10_000)
    parser.add_argument("--size", type=int, default=224)
    parser.add_argument("--pool", type=int, default=64)
    parser.add_argument("--workers", type=int, default=4)
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args()

    workdir = Path(tempfile.mkdtemp(prefix="groundeval_bench_"))
    manifest = build_manifest(workdir, args.n, args.size, args.pool, args.seed)
    instances = load_manifest(manifest)
    cfg = MetricConfig()

    start = time.perf_counter()
    evaluate_manifest(instances, cfg, workers=args.workers)
    elapsed = time.perf_counter() - start
    print(f"{args.n} instances at {args.size}x{args.size}, "
          f"{args.workers} worker(s): {elapsed:.1f}s "
          f"({1000 * elapsed / args.n:.2f} ms/instance)")
    return 0


if __name__ == "__main__":
    sys.exit(main())
