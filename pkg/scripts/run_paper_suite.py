"""Run every bundled ablation experiment and write a summary table.

The full suite at the shipped desk scale takes a while (the
population-vs-generations row alone runs 4000 evaluations per move);
start with --games 2 to smoke it.
"""
import argparse
import sys
import time
from pathlib import Path

from coevo_chess.harness import preset_rows, report_suite, run_series, write_series_logs


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--preset", default="paper-suite")
    ap.add_argument("--games", type=int, default=20)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--out", default="results")
    ap.add_argument("--workers", type=int, default=1)
    args = ap.parse_args(argv)

    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    rows = []
    for name, spec in preset_rows(args.preset, args.games, args.seed):
        t0 = time.monotonic()
        result = run_series(spec, workers=args.workers)
        rows.append((name, result))
        write_series_logs(result, out, name=name)
        print(f"{name}: a={result.wins_a} b={result.wins_b} "
              f"ties={result.ties} cutoffs={result.cutoffs} "
              f"({time.monotonic() - t0:.0f}s)", flush=True)

    table = report_suite(rows, "text")
    (out / "summary.txt").write_text(table)
    (out / "summary.csv").write_text(report_suite(rows, "csv"))
    print()
    print(table, end="")


if __name__ == "__main__":
    sys.exit(main())
