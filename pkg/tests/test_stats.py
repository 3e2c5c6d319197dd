"""
Census rows, density reports, growth fit and table rendering.

Validates the census against a serial oracle, conservation of counts,
the exactness of every ratio, worker independence and the CSV, JSON and
text renderings. Long-running checks are marked slow.
"""

from fractions import Fraction
from pathlib import Path
from typing import Any

import orjson
import pytest

import heightcensus
from heightcensus.curves import NONSINGULAR
from heightcensus.curves import NonTorsion
from heightcensus.curves import Order
from heightcensus.enumerate import ALL_POINTS
from heightcensus.enumerate import DegreeBound
from heightcensus.enumerate import RationalBound
from heightcensus.errors import ConfigError
from heightcensus.errors import ConsistencyError
from heightcensus.fields import RATIONALS
from heightcensus.fields import GlobalFieldCtx
from heightcensus.stats import CensusTally
from heightcensus.stats import DensityRow
from heightcensus.stats import ExperimentConfig
from heightcensus.stats import format_rows
from heightcensus.stats import row_records
from heightcensus.stats import tally_points
from heightcensus.stats import torsion_columns
from heightcensus.stats import write_rows

B1_CSV = (
    "bound,n_total,n_singular,t2,t3,t4,t5,t6,t7,t8,t9,t10,t12,"
    "n_nontorsion,frac_nontorsion,cap\n"
    "1,17,1,8,1,0,0,0,0,0,0,0,0,7,7/17,12\n"
)

# Exact census rows over ℚ: (n_total, n_singular, torsion by order,
# n_nontorsion) with cap 12.
CENSUS_GOLDENS = {
    2: (2655, 14, {2: 280, 3: 12, 4: 7, 6: 2}, 2340),
    3: (86479, 35, {2: 3020, 3: 49, 4: 22, 6: 2, 7: 2}, 83349),
    4: (1097650, 74, {2: 16588, 3: 175, 4: 53, 6: 5, 7: 3, 9: 2}, 1080750),
    5: (
        8022103,
        138,
        {2: 62656, 3: 402, 4: 106, 5: 2, 6: 10, 7: 3, 9: 2},
        7958784,
    ),
}

# f(B) = (torsion + singular) / total for B = 2..5.
NON_GENERIC_GOLDENS = {
    2: Fraction(315, 2655),
    3: Fraction(3130, 86479),
    4: Fraction(16900, 1097650),
    5: Fraction(63319, 8022103),
}

# Share of points with a nonsingular curve for B = 1..5.
NONSINGULAR_GOLDENS = (
    Fraction(16, 17),
    Fraction(2641, 2655),
    Fraction(86444, 86479),
    Fraction(1097576, 1097650),
    Fraction(8021965, 8022103),
)


def rational_bound(value: int | str) -> RationalBound:
    return RationalBound(Fraction(value))


def rational_census(*bounds: int | str, **options: Any) -> ExperimentConfig:
    return ExperimentConfig(
        bounds=tuple(rational_bound(b) for b in bounds), **options
    )


def synthetic_row(bound: int, n_total: int) -> DensityRow:
    return DensityRow(rational_bound(bound), n_total, 0, {}, n_total, 12)


def test_bound_one_row() -> None:
    """
    Validates the B = 1 census: 17 points, one cusp, 8 of order 2, one of
    order 3 and 7 of infinite order.
    """
    (row,) = heightcensus.run_census(rational_census(1))

    assert row.n_total == 17
    assert row.n_singular == 1
    assert dict(row.n_torsion_by_order) == {2: 8, 3: 1}
    assert row.n_nontorsion == 7
    assert row.frac_nontorsion == Fraction(7, 17)
    assert row.torsion(5) == 0


def _assert_golden_row(row: DensityRow, bound: int) -> None:
    n_total, n_singular, by_order, n_nontorsion = CENSUS_GOLDENS[bound]
    assert row.n_total == n_total
    assert row.n_singular == n_singular
    assert dict(row.n_torsion_by_order) == by_order
    assert row.n_nontorsion == n_nontorsion


def test_bound_two_row() -> None:
    """
    Validates the exact B = 2 census, including orders 4 and 6.
    """
    (row,) = heightcensus.run_census(rational_census(2))

    _assert_golden_row(row, 2)
    assert row.frac_nontorsion == Fraction(2340, 2655)


def test_census_matches_serial_oracle() -> None:
    """
    Validates the chunked census equals a serial tally of the point stream.
    """
    bound = rational_bound(2)
    (row,) = heightcensus.run_census(rational_census(2))
    oracle = tally_points(bound, heightcensus.enumerate_points(bound), 12)

    assert row == oracle
    assert row.n_total == heightcensus.count_points(bound)


def test_census_does_not_depend_on_workers() -> None:
    """
    Validates rows are identical for 1 and 2 workers.
    """
    serial = heightcensus.run_census(rational_census(1, 2))
    parallel = heightcensus.run_census(rational_census(1, 2, workers=2))

    assert serial == parallel


def test_function_field_constant_row() -> None:
    """
    Validates the d = 0 census over 𝔽₅(t) covers all 39 constant points.
    """
    q5 = GlobalFieldCtx.function_field(5)
    cfg = ExperimentConfig(field=q5, bounds=(DegreeBound(5, 0),))
    (row,) = heightcensus.run_census(cfg)

    assert row.n_total == 39
    assert row.cap == 24
    assert row.n_unlabeled == 0
    assert all(order <= 24 for order in row.n_torsion_by_order)


def test_sampling_is_reproducible_across_workers() -> None:
    """
    Validates sampled labels depend on the seed and chunk, not on workers.
    """
    q5 = GlobalFieldCtx.function_field(5)

    def census(workers: int, seed: int) -> DensityRow:
        cfg = ExperimentConfig(
            field=q5,
            bounds=(DegreeBound(5, 0),),
            rate=0.5,
            seed=seed,
            workers=workers,
        )
        return heightcensus.run_census(cfg)[0]

    row = census(1, 7)

    assert census(2, 7) == row
    assert census(1, 7) == row
    assert row.n_total == 39
    assert row.n_labeled + row.n_unlabeled == 39
    assert "n_unlabeled" in row_records([row], q5)[0]


def test_empty_bound_list() -> None:
    """
    Validates a census without bounds yields no rows and empty output.
    """
    rows = heightcensus.run_census(ExperimentConfig())

    assert rows == []
    assert format_rows(rows, "csv") == ""


def test_density_row_conservation() -> None:
    """
    Validates rows whose labels do not add up are refused.
    """
    bound = rational_bound(1)

    with pytest.raises(ConsistencyError, match="17 points"):
        DensityRow(bound, 17, 1, {2: 8}, 7, 12)
    with pytest.raises(ConsistencyError, match="outside"):
        DensityRow(bound, 1, 0, {13: 1}, 0, 12)
    with pytest.raises(ConsistencyError, match="negative"):
        DensityRow(bound, 0, -1, {}, 1, 12)


def test_tally_merge_is_associative() -> None:
    """
    Validates merging per-chunk tallies in any grouping gives one row.
    """
    labels = [Order(2), NonTorsion(12), Order(3), heightcensus.SINGULAR]
    parts = []
    for label in labels:
        tally = CensusTally(12)
        tally.n_total += 1
        tally.record(label)
        parts.append(tally)
    a, b, c, d = parts

    left = a.merge(b).merge(c).merge(d)
    right = a.merge(b.merge(c.merge(d)))
    bound = rational_bound(1)

    assert left.to_row(bound) == right.to_row(bound)
    assert left.to_row(bound).n_total == 4


def test_theorem1_report_at_bound_one() -> None:
    """
    Validates f(1) = (9 torsion + 1 singular) / 17 exactly.
    """
    rows = heightcensus.run_census(rational_census(1))
    (line,) = heightcensus.theorem1_report(rows).lines

    assert line.non_generic == Fraction(10, 17)
    assert line.positive_rank == Fraction(7, 17)
    assert line.non_generic_decimal == "0.588235"


def test_theorem1_report_without_singular_points() -> None:
    """
    Validates singular points leave the denominator when excluded.
    """
    rows = heightcensus.run_census(rational_census(1))
    report = heightcensus.theorem1_report(rows, include_singular=False)

    assert report.lines[0].non_generic == Fraction(9, 16)


def test_theorem1_report_edge_cases() -> None:
    """
    Validates empty input and empty rows are errors.
    """
    with pytest.raises(ConfigError):
        heightcensus.theorem1_report([])
    with pytest.raises(ConsistencyError):
        heightcensus.theorem1_report([synthetic_row(1, 0)])


def test_theorem1_report_skips_empty_rows_below_one() -> None:
    """
    Validates a bound below 1 yields an empty row and no fraction.
    """
    rows = heightcensus.run_census(rational_census("1/2", 1))
    report = heightcensus.theorem1_report(rows)

    assert rows[0].n_total == 0
    assert [line.bound for line in report.lines] == [rational_bound(1)]
    assert report.lines[0].non_generic == Fraction(10, 17)


def test_density_trend_flags() -> None:
    """
    Validates nonincreasing and strictly decreasing on synthetic rows.
    """
    bound1, bound2 = rational_bound(1), rational_bound(2)
    falling = [
        DensityRow(bound1, 10, 0, {2: 5}, 5, 12),
        DensityRow(bound2, 10, 0, {2: 2}, 8, 12),
    ]
    flat = [
        DensityRow(bound1, 10, 0, {2: 5}, 5, 12),
        DensityRow(bound2, 20, 0, {2: 10}, 10, 12),
    ]

    assert heightcensus.theorem1_report(falling).strictly_decreasing
    assert heightcensus.theorem1_report(flat).nonincreasing
    assert not heightcensus.theorem1_report(flat).strictly_decreasing


def test_equidistribution_report() -> None:
    """
    Validates n_pred / n_total per bound for Δ != 0 and the trivial test.
    """
    bounds = [rational_bound(1), rational_bound(2)]
    lines = heightcensus.equidistribution_report(bounds, NONSINGULAR)

    assert lines[0].ratio == Fraction(16, 17)
    assert lines[1].n_total == heightcensus.count_points(bounds[1])
    assert lines[0].ratio < lines[1].ratio
    assert all(
        line.ratio == 1
        for line in heightcensus.equidistribution_report(bounds, ALL_POINTS)
    )


def test_growth_exponent_on_synthetic_rows() -> None:
    """
    Validates the slope of log N against log B recovers N = 4 B**9.
    """
    rows = [synthetic_row(b, 4 * b**9) for b in (2, 4, 8)]

    assert heightcensus.fit_growth_exponent(rows) == pytest.approx(9.0)


def test_growth_exponent_of_constant_counts() -> None:
    """
    Validates a flat count has slope zero.
    """
    rows = [synthetic_row(b, 17) for b in (1, 2, 3)]

    assert heightcensus.fit_growth_exponent(rows) == pytest.approx(0.0)


def test_growth_exponent_needs_two_bounds() -> None:
    """
    Validates the fit refuses a single bound or empty rows.
    """
    with pytest.raises(ConfigError):
        heightcensus.fit_growth_exponent([synthetic_row(2, 5)])
    with pytest.raises(ConfigError):
        heightcensus.fit_growth_exponent(
            [synthetic_row(2, 5), synthetic_row(2, 5)]
        )
    with pytest.raises(ConsistencyError):
        heightcensus.fit_growth_exponent(
            [synthetic_row(1, 0), synthetic_row(2, 5)]
        )


def test_torsion_columns() -> None:
    """
    Validates Mazur's list over ℚ and 2..cap over 𝔽_q(t).
    """
    assert torsion_columns(RATIONALS, 12) == (2, 3, 4, 5, 6, 7, 8, 9, 10, 12)
    assert torsion_columns(GlobalFieldCtx.function_field(5), 4) == (2, 3, 4)


def test_csv_golden_at_bound_one() -> None:
    """
    Validates the CSV document for the B = 1 census byte for byte.
    """
    rows = heightcensus.run_census(rational_census(1))

    assert format_rows(rows, "csv") == B1_CSV


def test_json_uses_the_csv_keys() -> None:
    """
    Validates the JSON document holds the same records as the CSV.
    """
    rows = heightcensus.run_census(rational_census(1))
    records = orjson.loads(format_rows(rows, "json"))

    assert records == row_records(rows, RATIONALS)
    assert records[0]["frac_nontorsion"] == "7/17"
    assert list(records[0]) == B1_CSV.splitlines()[0].split(",")


def test_text_report() -> None:
    """
    Validates the text table ends with the density lines and growth fit.
    """
    rows = heightcensus.run_census(rational_census(1, 2))
    text = format_rows(rows, "text")

    assert "B=1  f=10/17 (0.588235)" in text
    assert "f nonincreasing: " in text
    assert "growth exponent: " in text


def test_stray_torsion_order_has_no_column() -> None:
    """
    Validates an order outside Mazur's list over ℚ is a consistency error.
    """
    row = DensityRow(rational_bound(1), 1, 0, {11: 1}, 0, 12)

    with pytest.raises(ConsistencyError, match="no column"):
        row_records([row], RATIONALS)


def test_write_rows_is_atomic(tmp_path: Path) -> None:
    """
    Validates the output file appears complete and no temporary remains.
    """
    rows = heightcensus.run_census(rational_census(1))
    out = tmp_path / "census.csv"

    write_rows(rows, out, "csv")

    assert out.read_text(encoding="utf-8") == B1_CSV
    assert list(tmp_path.iterdir()) == [out]


def test_run_census_writes_output(tmp_path: Path) -> None:
    """
    Validates run_census writes the configured file in the chosen format.
    """
    out = tmp_path / "census.json"
    cfg = rational_census(1, output=out, format="json")
    rows = heightcensus.run_census(cfg)

    assert orjson.loads(out.read_bytes()) == row_records(rows, RATIONALS)


def test_write_failure_propagates(tmp_path: Path) -> None:
    """
    Validates an unwritable destination raises and leaves nothing behind.
    """
    rows = heightcensus.run_census(rational_census(1))
    out = tmp_path / "missing" / "census.csv"

    with pytest.raises(OSError):
        write_rows(rows, out, "csv")
    assert not out.parent.exists()


@pytest.mark.parametrize(
    ("options", "match"),
    [
        ({"cap": 0}, "cap"),
        ({"workers": -1}, "worker"),
        ({"format": "xml"}, "format"),
        ({"rate": 0.5}, "exact"),
        ({"rate": 0.0}, "rate"),
    ],
)
def test_experiment_config_validation(
    options: dict[str, Any], match: str
) -> None:
    """
    Validates invalid census settings are rejected before any work.
    """
    with pytest.raises(ConfigError, match=match):
        rational_census(1, **options)


def test_bounds_must_increase_and_match_the_field() -> None:
    """
    Validates bound order and field membership.
    """
    with pytest.raises(ConfigError, match="strictly increasing"):
        rational_census(2, 1)
    with pytest.raises(ConfigError, match="does not belong"):
        ExperimentConfig(bounds=(DegreeBound(5, 1),))


@pytest.mark.slow
def test_growth_exponent_near_nine() -> None:
    """
    Validates the fitted exponent for B in 3..6 lies in [8.5, 9.5].
    """
    rows = heightcensus.run_census(rational_census(3, 4, 5, 6, workers=0))

    assert 8.5 <= heightcensus.fit_growth_exponent(rows) <= 9.5


@pytest.mark.slow
def test_mazur_consistency_up_to_bound_four() -> None:
    """
    Validates no order 11 and no order above 12 appear for B <= 4.
    """
    rows = heightcensus.run_census(rational_census(1, 2, 3, 4, workers=0))

    for row in rows:
        assert row.torsion(11) == 0
        assert all(order <= 12 for order in row.n_torsion_by_order)


@pytest.mark.slow
def test_non_generic_fraction_decreases() -> None:
    """
    Validates the exact rows and f(B) for B in 2..5, that f strictly
    decreases and that f(5) < f(2) / 3.
    """
    rows = heightcensus.run_census(rational_census(2, 3, 4, 5, workers=0))
    report = heightcensus.theorem1_report(rows)

    for bound, row, line in zip(range(2, 6), rows, report.lines, strict=True):
        _assert_golden_row(row, bound)
        assert line.non_generic == NON_GENERIC_GOLDENS[bound]
    assert report.strictly_decreasing
    assert report.lines[-1].non_generic < report.lines[0].non_generic / 3


@pytest.mark.slow
def test_nonsingular_ratio_increases_towards_one() -> None:
    """
    Validates the exact Δ != 0 ratios for B in 1..5, which increase and
    end >= 0.99.
    """
    bounds = [rational_bound(b) for b in range(1, 6)]
    lines = heightcensus.equidistribution_report(
        bounds, NONSINGULAR, workers=0
    )
    ratios = [line.ratio for line in lines]

    assert tuple(ratios) == NONSINGULAR_GOLDENS
    assert all(a < b for a, b in zip(ratios, ratios[1:], strict=False))
    assert ratios[-1] >= Fraction(99, 100)


@pytest.mark.slow
def test_census_csv_identical_for_one_two_and_eight_workers() -> None:
    """
    Validates the B = 4 census CSV is byte-identical across worker counts.
    """
    documents = [
        format_rows(
            heightcensus.run_census(rational_census(4, workers=w)), "csv"
        )
        for w in (1, 2, 8)
    ]

    assert documents[1] == documents[0]
    assert documents[2] == documents[0]
