"""
Hot-path timing for heights, enumeration chunks and torsion searches.

Zero-cost unless HEIGHTCENSUS_PROFILE is set when the package is imported
(and Python is not running with -O). Worker processes keep their own
tables, so profile with one worker for complete numbers.
"""

import os
import time
from dataclasses import dataclass
from typing import Any

PROFILE_HOT_PATHS = __debug__ and "HEIGHTCENSUS_PROFILE" in os.environ


@dataclass
class HotPathStats:
    """Accumulated timings of one profiled section."""

    section: str
    calls: int = 0
    total_ns: int = 0
    points: int = 0

    def record(self, duration_ns: int, points: int = 0) -> None:
        self.calls += 1
        self.total_ns += duration_ns
        self.points += points

    @property
    def mean_ns(self) -> float:
        return self.total_ns / self.calls if self.calls else 0.0


def format_hot_path_stats(stats: dict[str, HotPathStats]) -> str:
    """Renders stats as a fixed-width table, slowest section first."""
    lines = [f"{'section':<18} {'calls':>10} {'total ms':>12} {'mean us':>10}"]
    for s in sorted(stats.values(), key=lambda e: e.total_ns, reverse=True):
        lines.append(
            f"{s.section:<18} {s.calls:>10} {s.total_ns / 1e6:>12.2f} "
            f"{s.mean_ns / 1e3:>10.2f}"
        )
    return "\n".join(lines) + "\n"


if PROFILE_HOT_PATHS:
    _stats: dict[str, HotPathStats] = {}

    class ProfileContext:
        """Times the enclosed block under a section name."""

        def __init__(self, section: str, points: int = 0) -> None:
            self.section = section
            self.points = points
            self.start_ns = 0

        def __enter__(self) -> "ProfileContext":
            self.start_ns = time.perf_counter_ns()
            return self

        def __exit__(self, exc_type: Any, exc_val: Any, exc_tb: Any) -> None:
            elapsed = time.perf_counter_ns() - self.start_ns
            entry = _stats.setdefault(self.section, HotPathStats(self.section))
            entry.record(elapsed, self.points)

    def get_hot_path_stats() -> dict[str, HotPathStats]:
        """Snapshot of the sections timed so far in this process."""
        return dict(_stats)

    def clear_hot_path_stats() -> None:
        _stats.clear()

else:

    class ProfileContext:  # type: ignore[no-redef]
        def __init__(self, section: str, points: int = 0) -> None:
            pass

        def __enter__(self) -> "ProfileContext":
            return self

        def __exit__(self, exc_type: Any, exc_val: Any, exc_tb: Any) -> None:
            pass

    def get_hot_path_stats() -> dict[str, HotPathStats]:
        return {}

    def clear_hot_path_stats() -> None:
        pass


__all__ = [
    "PROFILE_HOT_PATHS",
    "HotPathStats",
    "ProfileContext",
    "clear_hot_path_stats",
    "format_hot_path_stats",
    "get_hot_path_stats",
]
