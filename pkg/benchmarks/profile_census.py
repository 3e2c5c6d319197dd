#!/usr/bin/env python3
"""
Hot-path profile of one census run.

Times height12, normalize, enumeration chunks and torsion searches with
HEIGHTCENSUS_PROFILE switched on, then prints where the time went.

    uv run python benchmarks/profile_census.py --bounds 1,2,3
"""

import argparse
import os
import sys
import time
from pathlib import Path

os.environ.setdefault("HEIGHTCENSUS_PROFILE", "1")

project_root = Path(__file__).parent.parent
sys.path.insert(0, str(project_root / "src"))

import heightcensus  # noqa: E402
from heightcensus._profile import PROFILE_HOT_PATHS  # noqa: E402
from heightcensus._profile import clear_hot_path_stats  # noqa: E402
from heightcensus._profile import format_hot_path_stats  # noqa: E402
from heightcensus._profile import get_hot_path_stats  # noqa: E402


def profile_bounds(field: str, bounds: list[str], cap: int | None) -> str:
    """Runs one serial census and returns the report."""
    ctx = heightcensus.GlobalFieldCtx.from_selector(field)
    cfg = heightcensus.ExperimentConfig(
        field=ctx,
        bounds=tuple(heightcensus.parse_bound(b, ctx) for b in bounds),
        cap=cap,
    )

    clear_hot_path_stats()
    start = time.perf_counter()
    rows = heightcensus.run_census(cfg)
    elapsed = time.perf_counter() - start

    lines = [f"census over {ctx}: {elapsed:.2f}s"]
    lines.extend(
        f"  B={row.bound}: {row.n_total} points, "
        f"{row.n_nontorsion} nontorsion"
        for row in rows
    )
    table = format_hot_path_stats(get_hot_path_stats())
    return "\n".join(lines) + "\n\n" + table


def main() -> int:
    parser = argparse.ArgumentParser(description="Profile one census run.")
    parser.add_argument("--field", default="Q")
    parser.add_argument("--bounds", default="1,2,3")
    parser.add_argument("--cap", type=int)
    args = parser.parse_args()

    if not PROFILE_HOT_PATHS:
        print("profiling is off; run without python -O", file=sys.stderr)
        return 1
    print(profile_bounds(args.field, args.bounds.split(","), args.cap))
    return 0


if __name__ == "__main__":
    sys.exit(main())
