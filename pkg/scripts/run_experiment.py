#!/usr/bin/env python3
"""Run the full four-method timing comparison and save the reports.

Cross-validates first (9 significant digits over 1000 points), then times
every (method, expression) pair, prints the summary table and writes
report.json / report.csv next to --out-dir.
"""

import argparse
import sys
import time
from pathlib import Path

from evalbench import (
    BenchConfig,
    METHOD_LABELS,
    cross_validate,
    emit_report,
    run_benchmark,
)


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--n", type=int, default=5000, help="points per sweep")
    parser.add_argument("--seed", type=int, default=42)
    parser.add_argument("--repetitions", type=int, default=10)
    parser.add_argument("--min-window", type=float, default=100.0, help="minimum CPU window (ms)")
    parser.add_argument("--out-dir", type=Path, default=Path("."))
    args = parser.parse_args()

    cfg = BenchConfig(
        n_points=args.n,
        seed=args.seed,
        repetitions=args.repetitions,
        min_window_ms=args.min_window,
    )

    print("cross-validating the four methods ...", file=sys.stderr)
    cross_validate(n_points=1000, seed=cfg.seed, tolerance_sig_digits=9)

    print("timing (single-threaded; prefer a quiet machine) ...", file=sys.stderr)
    started = time.perf_counter()
    report = run_benchmark(cfg)
    elapsed = time.perf_counter() - started

    print(emit_report(report, "table"))
    aggregate = {
        method: sum(report.cell(method, e).median_s for e in report.expression_ids)
        for method in report.methods
    }
    print("aggregate median seconds per sweep, fastest first:")
    for method, total in sorted(aggregate.items(), key=lambda kv: kv[1]):
        print(f"  {METHOD_LABELS[method]:<22} {total:.3e}")

    args.out_dir.mkdir(parents=True, exist_ok=True)
    json_path = args.out_dir / "report.json"
    csv_path = args.out_dir / "report.csv"
    json_path.write_text(emit_report(report, "json"))
    csv_path.write_text(emit_report(report, "csv"))
    print(f"\nwrote {json_path} and {csv_path} (wall time {elapsed:.1f}s)", file=sys.stderr)
    return 0


if __name__ == "__main__":
    sys.exit(main())
