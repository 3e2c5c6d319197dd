"""
Nontorsion density experiment over ℚ.

Counts every point of P(2,3,4)(ℚ) with Ht <= B for B in {2, 3, 4, 5},
classifies the marked point and checks that the non-generic fraction
f(B) = (torsion + singular) / total falls fast enough:

- f(B) is strictly decreasing over the grid
- f(5) < f(2) / 3

B = 5 takes minutes with one worker; pass --threads 0 to use every core.
"""

import argparse
import time
from fractions import Fraction
from typing import Any

from heightcensus import RATIONALS
from heightcensus import ExperimentConfig
from heightcensus import run_census
from heightcensus import theorem1_report
from heightcensus.enumerate import bound_for
from heightcensus.stats import format_rows

GRID = (2, 3, 4, 5)
DROP_FACTOR = 3


def run_trend(
    bounds: tuple[int, ...], workers: int, *, include_singular: bool
) -> dict[str, Any]:
    """Runs the census and evaluates both trend conditions."""
    cfg = ExperimentConfig(
        bounds=tuple(bound_for(RATIONALS, b) for b in bounds),
        workers=workers,
        include_singular=include_singular,
    )

    start = time.perf_counter()
    rows = run_census(cfg)
    elapsed = time.perf_counter() - start

    report = theorem1_report(rows, include_singular=include_singular)
    first, last = report.lines[0], report.lines[-1]
    ratio = Fraction(0)
    if last.non_generic:
        ratio = first.non_generic / last.non_generic
    return {
        "rows": rows,
        "report": report,
        "elapsed": elapsed,
        "decreasing": report.strictly_decreasing,
        "drop": last.non_generic < first.non_generic / DROP_FACTOR,
        "ratio": ratio,
    }


def print_results(results: dict[str, Any], *, include_singular: bool) -> bool:
    """Prints the census table and verdict; True if both conditions hold."""
    print("=" * 72)
    print("NONTORSION DENSITY OVER Q")
    print("=" * 72)
    print(
        format_rows(results["rows"], "text", include_singular=include_singular)
    )
    print("-" * 72)
    print(f"elapsed: {results['elapsed']:.1f}s")
    print(f"strictly decreasing: {'yes' if results['decreasing'] else 'no'}")
    print(
        f"f(first) / f(last) = {float(results['ratio']):.3f} "
        f"(need > {DROP_FACTOR})"
    )
    return bool(results["decreasing"] and results["drop"])


def main() -> None:
    parser = argparse.ArgumentParser(description="Nontorsion density trend.")
    parser.add_argument(
        "--bounds",
        default=",".join(str(b) for b in GRID),
        help="comma-separated integer bounds",
    )
    parser.add_argument("--threads", type=int, default=1)
    parser.add_argument("--exclude-singular", action="store_true")
    args = parser.parse_args()

    bounds = tuple(int(b) for b in args.bounds.split(","))
    include_singular = not args.exclude_singular
    results = run_trend(bounds, args.threads, include_singular=include_singular)
    confirmed = print_results(results, include_singular=include_singular)

    print("\n" + "=" * 72)
    if confirmed:
        print("✓ CONFIRMED: the non-generic fraction shrinks across the grid")
    else:
        print("✗ NOT CONFIRMED: f(B) did not fall as required on this grid")


if __name__ == "__main__":
    main()
