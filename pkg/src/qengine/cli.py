"""Command-line harness: `qengine suite` and `qengine crossover`."""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import bench


def _csv_list(text: str):
    return tuple(item.strip() for item in text.split(",") if item.strip())


def _csv_ints(text: str):
    try:
        return tuple(int(item) for item in _csv_list(text))
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers: {exc}")


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qengine",
        description="Paired fast/precise benchmark and verification harness",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    suite = sub.add_parser("suite", help="run the paired measurement suite")
    suite.add_argument("--categories", type=_csv_list, default=bench.CATEGORIES,
                       help="comma-separated category list (default: all)")
    suite.add_argument("--samples", type=int, default=50,
                       help="paired samples per category (default: 50)")
    suite.add_argument("--seed", type=int, default=42,
                       help="input stream seed (default: 42)")
    suite.add_argument("--dims", type=_csv_ints, default=(4, 8, 16),
                       help="matmul dimensions cycled across samples")
    suite.add_argument("--tiles", type=_csv_ints, default=(32,),
                       help="tile sizes; the suite uses the first entry")
    suite.add_argument("--mul-variant", choices=("floor", "rounded"), default="floor",
                       help="scalar multiply rounding for the fast path")
    suite.add_argument("--out", default="bench_out", help="output directory")
    suite.add_argument("--format", choices=("csv", "json", "both"), default="both")

    cross = sub.add_parser("crossover", help="matmul crossover sweep over dims x tiles")
    cross.add_argument("--dims", type=_csv_ints, default=(4, 8, 16, 32, 64, 128))
    cross.add_argument("--tiles", type=_csv_ints, default=(8, 16, 32))
    cross.add_argument("--reps", type=int, default=20,
                       help="timed repetitions per grid cell (default: 20)")
    cross.add_argument("--seed", type=int, default=42)
    cross.add_argument("--out", default="bench_out", help="output directory")
    cross.add_argument("--format", choices=("csv", "json", "both"), default="json")
    return parser


def _run_suite(args) -> int:
    config = bench.BenchConfig(
        categories=tuple(args.categories),
        samples=args.samples,
        seed=args.seed,
        dims=tuple(args.dims),
        tile=args.tiles[0],
        mul_variant=args.mul_variant,
    )
    records, summary = bench.run_suite(config)
    written = bench.emit(records, summary, args.out, args.format)
    for path in written:
        print(f"wrote {path}")
    for op, entry in summary["categories"].items():
        speedup = entry.get("mean_speedup")
        if speedup is not None:
            print(f"{op}: mean speedup {speedup:.3f}x over {entry['fast']['samples']} pairs")
    return 0


def _run_crossover(args) -> int:
    report = bench.crossover_sweep(args.dims, args.tiles, reps=args.reps, seed=args.seed)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    written = []
    if args.format in ("json", "both"):
        path = out / "crossover.json"
        with open(path, "w") as fh:
            json.dump(report, fh, indent=2)
            fh.write("\n")
        written.append(path)
    if args.format in ("csv", "both"):
        path = out / "crossover.csv"
        with open(path, "w") as fh:
            fh.write("dim,tile,fast_median_ns,precise_median_ns,speedup,sub_tile\n")
            for c in report["cells"]:
                fh.write(
                    f"{c['dim']},{c['tile']},{c['fast_median_ns']!r},"
                    f"{c['precise_median_ns']!r},{c['speedup']!r},{int(c['sub_tile'])}\n"
                )
        written.append(path)
    for path in written:
        print(f"wrote {path}")
    for tile, dim in report["crossover_by_tile"].items():
        where = f"n = {dim}" if dim is not None else "not reached"
        print(f"tile {tile}: fast kernel reaches parity at {where}")
    return 0


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "suite":
            return _run_suite(args)
        return _run_crossover(args)
    except (ValueError, OSError, OverflowError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
