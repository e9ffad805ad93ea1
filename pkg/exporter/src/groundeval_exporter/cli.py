"""Command-line entry point for the exporter.

Usage:
    groundeval-export export-mock --n 100 --seed 0 --out ./mock_dataset
"""

from __future__ import annotations

import argparse
import sys

from .errors import InvalidParameter, IoError
from .mock import export_mock_dataset

EXIT_OK = 0
EXIT_DATA = 1
EXIT_IO = 2


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="groundeval-export",
        description="Emit evaluator-ready manifest + NPY map datasets",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    mock = sub.add_parser("export-mock",
                          help="write a deterministic synthetic dataset")
    mock.add_argument("--n", type=int, default=100, help="number of records")
    mock.add_argument("--seed", type=int, default=0, help="generator seed")
    mock.add_argument("--out", required=True, help="output directory")
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "export-mock":
        try:
            manifest = export_mock_dataset(args.n, args.seed, args.out)
        except InvalidParameter as exc:
            print(f"error: {exc}", file=sys.stderr)
            return EXIT_DATA
        except IoError as exc:
            print(f"error: {exc}", file=sys.stderr)
            return EXIT_IO
        print(f"wrote {args.n} records, manifest at {manifest}")
        return EXIT_OK
    return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
