"""
Growth law of N(B) for P(2,3,4).

Fits the slope of log N(B) against log B. The weights sum to 9, so both
fields should give an exponent near 9. Over 𝔽_q(t) the bound B = q^d
grows geometrically: N(q^1) is already of order q^12 / (q - 1), and a fit over
q = 5 with d in {0, 1} takes hours on one core. Pass --field 5 --bounds 0,1
explicitly to run it.

Also prints the share of nonsingular points per bound, which should tend
to 1 as B grows.
"""

import argparse
import time

from heightcensus import NONSINGULAR
from heightcensus import ExperimentConfig
from heightcensus import GlobalFieldCtx
from heightcensus import HeightBound
from heightcensus import equidistribution_report
from heightcensus import fit_growth_exponent
from heightcensus import parse_bound
from heightcensus import run_census

EXPECTED_EXPONENT = 9.0
TOLERANCE = 0.5

GRIDS = {"Q": "1,2,3,4,5"}


def measure(field: str, bounds_text: str, workers: int) -> None:
    """Prints N(B), the fitted exponent and the nonsingular share."""
    ctx = GlobalFieldCtx.from_selector(field)
    bounds: tuple[HeightBound, ...] = tuple(
        parse_bound(b, ctx) for b in bounds_text.split(",")
    )
    cfg = ExperimentConfig(field=ctx, bounds=bounds, workers=workers, cap=2)

    start = time.perf_counter()
    rows = run_census(cfg)
    elapsed = time.perf_counter() - start

    print(f"\n{ctx}  ({elapsed:.1f}s)")
    print(f"{'B':>8} | {'N(B)':>10} | {'nonsingular':>12}")
    print("-" * 36)
    lines = equidistribution_report(bounds, NONSINGULAR, workers=workers)
    for row, line in zip(rows, lines, strict=True):
        print(
            f"{row.bound!s:>8} | {row.n_total:>10} | "
            f"{float(line.ratio):>12.6f}"
        )

    exponent = fit_growth_exponent(rows)
    verdict = abs(exponent - EXPECTED_EXPONENT) <= TOLERANCE
    print(f"growth exponent: {exponent:.4f}  ({'ok' if verdict else 'off'})")


def main() -> None:
    parser = argparse.ArgumentParser(description="Growth law of N(B).")
    parser.add_argument(
        "--field",
        action="append",
        help="Q or a prime q; repeat for several fields",
    )
    parser.add_argument(
        "--bounds", help="comma-separated bounds (one field only)"
    )
    parser.add_argument("--threads", type=int, default=1)
    args = parser.parse_args()

    fields = args.field or list(GRIDS)
    for field in fields:
        grid = args.bounds or GRIDS.get(field.strip().upper(), "0,1")
        measure(field, grid, args.threads)


if __name__ == "__main__":
    main()
