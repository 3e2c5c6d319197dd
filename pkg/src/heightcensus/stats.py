"""
Census driver: torsion densities, equidistribution ratios and growth law.

For every bound the census streams the points of bounded height through the
chart, classifies the marked point and tallies a ``DensityRow``. Tallies are
accumulated per enumeration chunk and merged, so rows do not depend on the
worker count. Every ratio is an exact ``Fraction``; decimals are renderings.
"""

from __future__ import annotations

import csv
import dataclasses
import io
import logging
import math
import random
import time
from collections import Counter
from collections.abc import Iterable
from collections.abc import Mapping
from collections.abc import Sequence
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Literal

import numpy as np
import orjson

from .curves import RATIONAL_TORSION_ORDERS
from .curves import NonTorsion
from .curves import Order
from .curves import Singular
from .curves import TorsionClass
from .curves import classify_integral
from .curves import classify_triple
from .curves import default_cap
from .enumerate import HeightBound
from .enumerate import RationalBound
from .enumerate import SubstackPredicate
from .enumerate import bound_value
from .enumerate import count_with_predicate
from .enumerate import fold_points
from .enumerate import resolve_workers
from .errors import ConfigError
from .errors import ConsistencyError
from .fields import RATIONALS
from .fields import GlobalFieldCtx
from .fields import as_integer
from .heights import WeightedTriple

logger = logging.getLogger(__name__)

type OutputFormat = Literal["csv", "json", "text"]

OUTPUT_FORMATS: tuple[OutputFormat, ...] = ("csv", "json", "text")


@dataclass(frozen=True, slots=True)
class DensityRow:
    """
    Census counts at one bound.

    n_total = n_singular + sum(n_torsion_by_order) + n_nontorsion + n_unlabeled.
    n_unlabeled counts points the sampler skipped; it is 0 at rate 1.
    """

    bound: HeightBound
    n_total: int
    n_singular: int
    n_torsion_by_order: Mapping[int, int]
    n_nontorsion: int
    cap: int
    n_unlabeled: int = 0
    rate: float = 1.0

    def __post_init__(self) -> None:
        counts = (
            self.n_total,
            self.n_singular,
            self.n_nontorsion,
            self.n_unlabeled,
            *self.n_torsion_by_order.values(),
        )
        if any(n < 0 for n in counts):
            raise ConsistencyError(f"negative count in row {self.bound}")
        if any(not 1 <= n <= self.cap for n in self.n_torsion_by_order):
            raise ConsistencyError(
                f"torsion order outside 1..{self.cap} in row {self.bound}"
            )
        labeled = self.n_singular + self.n_torsion + self.n_nontorsion
        if self.n_total != labeled + self.n_unlabeled:
            raise ConsistencyError(
                f"row {self.bound}: {self.n_total} points but "
                f"{labeled} labeled and {self.n_unlabeled} unlabeled"
            )

    @property
    def n_torsion(self) -> int:
        return sum(self.n_torsion_by_order.values())

    @property
    def n_labeled(self) -> int:
        return self.n_total - self.n_unlabeled

    def torsion(self, order: int) -> int:
        return self.n_torsion_by_order.get(order, 0)

    @property
    def frac_nontorsion(self) -> Fraction:
        if not self.n_labeled:
            return Fraction(0)
        return Fraction(self.n_nontorsion, self.n_labeled)


@dataclass(slots=True)
class CensusTally:
    """Per-chunk census accumulator; ``merge`` is associative."""

    cap: int
    fast_paths: bool = True
    rate: float = 1.0
    rng: random.Random | None = None
    n_total: int = 0
    n_singular: int = 0
    n_nontorsion: int = 0
    n_unlabeled: int = 0
    torsion: Counter[int] = dataclasses.field(default_factory=Counter)

    def add(self, x: WeightedTriple) -> None:
        self.n_total += 1
        if self.rng is not None and self.rng.random() >= self.rate:
            self.n_unlabeled += 1
            return
        self.record(classify(x, self.cap, fast_paths=self.fast_paths))

    def record(self, label: TorsionClass) -> None:
        match label:
            case Singular():
                self.n_singular += 1
            case Order(n):
                self.torsion[n] += 1
            case NonTorsion():
                self.n_nontorsion += 1

    def merge(self, other: CensusTally) -> CensusTally:
        return CensusTally(
            self.cap,
            self.fast_paths,
            self.rate,
            None,
            self.n_total + other.n_total,
            self.n_singular + other.n_singular,
            self.n_nontorsion + other.n_nontorsion,
            self.n_unlabeled + other.n_unlabeled,
            self.torsion + other.torsion,
        )

    def to_row(self, bound: HeightBound) -> DensityRow:
        return DensityRow(
            bound,
            self.n_total,
            self.n_singular,
            dict(sorted(self.torsion.items())),
            self.n_nontorsion,
            self.cap,
            self.n_unlabeled,
            self.rate,
        )


@dataclass(frozen=True, slots=True)
class _CensusTallyFactory:
    cap: int
    fast_paths: bool
    rate: float
    seed: int

    def __call__(self, index: int) -> CensusTally:
        # Seeded per chunk, so sampling does not depend on the worker count.
        rng = random.Random(f"{self.seed}:{index}") if self.rate < 1 else None
        return CensusTally(self.cap, self.fast_paths, self.rate, rng)


def classify(
    x: WeightedTriple, cap: int, *, fast_paths: bool = True
) -> TorsionClass:
    """classify_triple, with the integer shortcut for integral ℚ triples."""
    if x.field.is_rationals and x.is_integral():
        return classify_integral(
            as_integer(x.x0),
            as_integer(x.x1),
            as_integer(x.x2),
            cap,
            fast_paths=fast_paths,
        )
    return classify_triple(x, cap, fast_paths=fast_paths)


def tally_points(
    bound: HeightBound,
    points: Iterable[WeightedTriple],
    cap: int,
    *,
    fast_paths: bool = True,
) -> DensityRow:
    """Census row of an explicit point list, serially and without sampling."""
    tally = CensusTally(cap, fast_paths)
    for x in points:
        tally.add(x)
    return tally.to_row(bound)


@dataclass(frozen=True)
class ExperimentConfig:
    """
    One census run: a field, a strictly increasing list of bounds and the
    classification and output settings. ℚ runs are always exact (rate 1).
    """

    field: GlobalFieldCtx = RATIONALS
    bounds: tuple[HeightBound, ...] = ()
    cap: int | None = None
    workers: int = 1
    output: Path | None = None
    format: OutputFormat = "csv"
    rate: float = 1.0
    seed: int = 0
    include_singular: bool = True
    fast_paths: bool = True

    def __post_init__(self) -> None:
        if not isinstance(self.field, GlobalFieldCtx):
            raise TypeError("field must be a GlobalFieldCtx")
        for bound in self.bounds:
            if bound.field != self.field:
                raise ConfigError(
                    f"bound {bound} does not belong to {self.field}"
                )
        for lower, upper in zip(self.bounds, self.bounds[1:], strict=False):
            if not bound_value(lower) < bound_value(upper):
                raise ConfigError(
                    f"bounds must be strictly increasing: {lower} then {upper}"
                )
        if self.cap is not None and self.cap < 1:
            raise ConfigError(f"torsion cap must be >= 1, got {self.cap}")
        if self.workers < 0:
            raise ConfigError(f"worker count must be >= 0, got {self.workers}")
        if self.format not in OUTPUT_FORMATS:
            raise ConfigError(f"unknown output format {self.format!r}")
        if not 0 < self.rate <= 1:
            raise ConfigError(
                f"sampling rate must be in (0, 1], got {self.rate}"
            )
        if self.field.is_rationals and self.rate != 1:
            raise ConfigError("censuses over Q are exact; rate must be 1")

    @property
    def torsion_cap(self) -> int:
        return default_cap(self.field) if self.cap is None else self.cap


def run_census(cfg: ExperimentConfig) -> list[DensityRow]:
    """
    One DensityRow per bound; deterministic whenever cfg.rate is 1.

    With cfg.output set the rows are also written there, atomically: an I/O
    failure leaves no partial file behind and propagates.
    """
    workers = resolve_workers(cfg.workers)
    factory = _CensusTallyFactory(
        cfg.torsion_cap, cfg.fast_paths, cfg.rate, cfg.seed
    )
    rows: list[DensityRow] = []
    for bound in cfg.bounds:
        start = time.perf_counter()
        row = fold_points(bound, factory, workers=workers).to_row(bound)
        logger.info(
            "B=%s: %d points, %d singular, %d torsion, %d nontorsion, "
            "%d unlabeled (%.2fs, %d workers)",
            bound,
            row.n_total,
            row.n_singular,
            row.n_torsion,
            row.n_nontorsion,
            row.n_unlabeled,
            time.perf_counter() - start,
            workers,
        )
        rows.append(row)
    if cfg.output is not None:
        write_rows(
            rows,
            cfg.output,
            cfg.format,
            field=cfg.field,
            include_singular=cfg.include_singular,
        )
    return rows


@dataclass(frozen=True, slots=True)
class NonGenericLine:
    """Non-generic fraction f(B) and its complement at one bound."""

    bound: HeightBound
    non_generic: Fraction
    positive_rank: Fraction

    @property
    def non_generic_decimal(self) -> str:
        return f"{float(self.non_generic):.6f}"

    @property
    def positive_rank_decimal(self) -> str:
        return f"{float(self.positive_rank):.6f}"


@dataclass(frozen=True, slots=True)
class NonGenericReport:
    lines: tuple[NonGenericLine, ...]

    @property
    def nonincreasing(self) -> bool:
        return all(
            a.non_generic >= b.non_generic
            for a, b in zip(self.lines, self.lines[1:], strict=False)
        )

    @property
    def strictly_decreasing(self) -> bool:
        return all(
            a.non_generic > b.non_generic
            for a, b in zip(self.lines, self.lines[1:], strict=False)
        )


def theorem1_report(
    rows: Sequence[DensityRow], *, include_singular: bool = True
) -> NonGenericReport:
    """
    f(B) = (torsion + singular) / total and 1 - f(B), per bound.

    With include_singular=False singular points leave the denominator and
    f(B) counts torsion among elliptic curves only. Sampled rows use their
    labeled points. Empty rows below B = 1 get no line.
    """
    if not rows:
        raise ConfigError("theorem1_report needs at least one row")
    lines = []
    for row in rows:
        if row.n_total == 0:
            if bound_value(row.bound) < 1:
                continue
            raise ConsistencyError(
                f"row {row.bound} has no points; Ht >= 1 forbids this at B >= 1"
            )
        if include_singular:
            numerator = row.n_torsion + row.n_singular
            denominator = row.n_labeled
        else:
            numerator = row.n_torsion
            denominator = row.n_labeled - row.n_singular
        if denominator <= 0:
            raise ConsistencyError(f"row {row.bound} has no labeled curves")
        f = Fraction(numerator, denominator)
        lines.append(NonGenericLine(row.bound, f, 1 - f))
    return NonGenericReport(tuple(lines))


@dataclass(frozen=True, slots=True)
class EquidistributionLine:
    bound: HeightBound
    n_pred: int
    n_total: int

    @property
    def ratio(self) -> Fraction:
        if not self.n_total:
            return Fraction(0)
        return Fraction(self.n_pred, self.n_total)


def equidistribution_report(
    bounds: Iterable[HeightBound],
    pred: SubstackPredicate,
    *,
    workers: int = 1,
) -> list[EquidistributionLine]:
    """n_pred / n_total per bound; a ContractError from pred propagates."""
    workers = resolve_workers(workers)
    lines = []
    for bound in bounds:
        n_pred, n_total = count_with_predicate(bound, pred, workers=workers)
        lines.append(EquidistributionLine(bound, n_pred, n_total))
    return lines


def log_bound(bound: HeightBound) -> float:
    if isinstance(bound, RationalBound):
        b = bound.value
        return math.log(b.numerator) - math.log(b.denominator)
    return bound.d * math.log(bound.q)


def fit_growth_exponent(rows: Sequence[DensityRow]) -> float:
    """Least-squares slope of log n_total against log B."""
    if len(rows) < 2:
        raise ConfigError("a growth fit needs at least two rows")
    if len({row.bound for row in rows}) < 2:
        raise ConfigError("a growth fit needs two distinct bounds")
    if any(row.n_total <= 0 for row in rows):
        raise ConsistencyError("a growth fit needs nonempty rows")
    xs = np.array([log_bound(row.bound) for row in rows])
    ys = np.log(np.array([float(row.n_total) for row in rows]))
    slope, _ = np.polyfit(xs, ys, 1)
    return float(slope)


def torsion_columns(field: GlobalFieldCtx, cap: int) -> tuple[int, ...]:
    """Torsion orders with a column: Mazur's list over ℚ, 2..cap otherwise."""
    if field.is_rationals:
        return RATIONAL_TORSION_ORDERS
    return tuple(range(2, cap + 1))


def _fraction_text(f: Fraction) -> str:
    return f"{f.numerator}/{f.denominator}"


def row_records(
    rows: Sequence[DensityRow], field: GlobalFieldCtx
) -> list[dict[str, int | str]]:
    """Rows as ordered records with the CSV column names."""
    if not rows:
        return []
    cap = rows[0].cap
    columns = torsion_columns(field, cap)
    sampled = any(row.rate < 1 for row in rows)
    records: list[dict[str, int | str]] = []
    for row in rows:
        stray = set(row.n_torsion_by_order) - set(columns)
        if any(row.torsion(n) for n in stray):
            raise ConsistencyError(
                f"row {row.bound} has torsion of order {sorted(stray)}, "
                "which has no column"
            )
        record: dict[str, int | str] = {
            "bound": str(row.bound),
            "n_total": row.n_total,
            "n_singular": row.n_singular,
        }
        for n in columns:
            record[f"t{n}"] = row.torsion(n)
        record["n_nontorsion"] = row.n_nontorsion
        record["frac_nontorsion"] = _fraction_text(row.frac_nontorsion)
        record["cap"] = row.cap
        if sampled:
            record["n_unlabeled"] = row.n_unlabeled
        records.append(record)
    return records


def _render_csv(rows: Sequence[DensityRow], field: GlobalFieldCtx) -> str:
    records = row_records(rows, field)
    out = io.StringIO()
    if records:
        writer = csv.DictWriter(
            out, fieldnames=list(records[0]), lineterminator="\n"
        )
        writer.writeheader()
        writer.writerows(records)
    return out.getvalue()


def _render_json(rows: Sequence[DensityRow], field: GlobalFieldCtx) -> str:
    records = row_records(rows, field)
    document = orjson.dumps(records, option=orjson.OPT_INDENT_2)
    return document.decode() + "\n"


def _render_text(
    rows: Sequence[DensityRow],
    field: GlobalFieldCtx,
    *,
    include_singular: bool,
) -> str:
    records = row_records(rows, field)
    if not records:
        return ""
    names = list(records[0])
    widths = [
        max(len(name), *(len(str(r[name])) for r in records)) for name in names
    ]
    lines = [
        "  ".join(name.rjust(w) for name, w in zip(names, widths, strict=True))
    ]
    lines.extend(
        "  ".join(
            str(r[name]).rjust(w) for name, w in zip(names, widths, strict=True)
        )
        for r in records
    )
    lines.append("")
    report = theorem1_report(rows, include_singular=include_singular)
    by_bound = {line.bound: line for line in report.lines}
    for row in rows:
        line = by_bound.get(row.bound)
        if line is None:
            lines.append(f"B={row.bound}  f=n/a")
            continue
        lines.append(
            f"B={line.bound}  f={_fraction_text(line.non_generic)} "
            f"({line.non_generic_decimal})  "
            f"1-f={line.positive_rank_decimal}"
        )
    lines.append(f"f nonincreasing: {'yes' if report.nonincreasing else 'no'}")
    nonempty = [row for row in rows if row.n_total > 0]
    if len({row.bound for row in nonempty}) >= 2:
        lines.append(f"growth exponent: {fit_growth_exponent(nonempty):.4f}")
    return "\n".join(lines) + "\n"


def format_rows(
    rows: Sequence[DensityRow],
    fmt: OutputFormat,
    *,
    field: GlobalFieldCtx = RATIONALS,
    include_singular: bool = True,
) -> str:
    """Renders rows as CSV (canonical), JSON (same keys) or a text table."""
    match fmt:
        case "csv":
            return _render_csv(rows, field)
        case "json":
            return _render_json(rows, field)
        case "text":
            return _render_text(rows, field, include_singular=include_singular)
    raise ConfigError(f"unknown output format {fmt!r}")


def write_rows(
    rows: Sequence[DensityRow],
    path: Path,
    fmt: OutputFormat,
    *,
    field: GlobalFieldCtx = RATIONALS,
    include_singular: bool = True,
) -> None:
    """Writes through a sibling temporary file, then renames over path."""
    text = format_rows(
        rows, fmt, field=field, include_singular=include_singular
    )
    tmp = path.with_name(path.name + ".tmp")
    try:
        tmp.write_text(text, encoding="utf-8")
        tmp.replace(path)
    except OSError:
        tmp.unlink(missing_ok=True)
        raise
    logger.info("wrote %d rows to %s", len(rows), path)


__all__ = [
    "OUTPUT_FORMATS",
    "CensusTally",
    "DensityRow",
    "EquidistributionLine",
    "ExperimentConfig",
    "NonGenericLine",
    "NonGenericReport",
    "OutputFormat",
    "classify",
    "equidistribution_report",
    "fit_growth_exponent",
    "format_rows",
    "log_bound",
    "row_records",
    "run_census",
    "tally_points",
    "theorem1_report",
    "torsion_columns",
    "write_rows",
]
