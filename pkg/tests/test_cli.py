"""
End-to-end runs of the heightcensus command line.

Validates the data each command prints on stdout, the exit status for
success, input errors and usage errors, and the --config manifest.
"""

import logging
from collections.abc import Iterator
from pathlib import Path

import orjson
import pytest

from heightcensus.cli import main
from heightcensus.cli import parse_config
from heightcensus.enumerate import DegreeBound

from .conftest import B1_CLASSES

pytestmark = pytest.mark.integration

B1_CSV = (
    "bound,n_total,n_singular,t2,t3,t4,t5,t6,t7,t8,t9,t10,t12,"
    "n_nontorsion,frac_nontorsion,cap\n"
    "1,17,1,8,1,0,0,0,0,0,0,0,0,7,7/17,12\n"
)


@pytest.fixture(autouse=True)
def detach_cli_logging() -> Iterator[None]:
    """Drops the stderr handler main installs, which outlives capsys."""
    yield
    root = logging.getLogger("heightcensus")
    for handler in list(root.handlers):
        root.removeHandler(handler)
    root.setLevel(logging.NOTSET)


def run_cli(
    capsys: pytest.CaptureFixture[str], *argv: str
) -> tuple[int, str, str]:
    status = main(list(argv))
    captured = capsys.readouterr()
    return status, captured.out, captured.err


@pytest.mark.parametrize(
    ("argv", "expected"),
    [
        (("normalize", "--triple", "4,8,16"), "1,1,1\n"),
        (("height", "--triple", "3,5,0"), "729\n"),
        (("height", "--field", "5", "--triple", "[0,1],[0],[0]"), "5^1\n"),
    ],
    ids=["normalize", "height", "function field"],
)
def test_triple_commands(
    capsys: pytest.CaptureFixture[str], argv: tuple[str, ...], expected: str
) -> None:
    """
    Validates height and normalize print one line and exit 0.
    """
    status, out, _ = run_cli(capsys, *argv)

    assert status == 0
    assert out == expected


@pytest.mark.parametrize(
    ("argv", "expected"),
    [
        (
            ("--triple=-12,108,-432",),
            ["order 5", "a4 = -432", "a6 = 8208", "delta = -23944605696"],
        ),
        (
            ("--triple", "3,5,0"),
            ["nontorsion(cap=12)", "a4 = 0", "a6 = -2", "delta = -1728"],
        ),
        (
            ("--triple", "3,5,0", "--cap", "4"),
            ["nontorsion(cap=4)", "a4 = 0", "a6 = -2", "delta = -1728"],
        ),
        (
            ("--triple", "1,1,0", "--no-fast-paths"),
            ["singular", "a4 = 0", "a6 = 0", "delta = 0"],
        ),
        (
            ("--field", "5", "--triple", "[0],[1],[0]"),
            ["order 3", "a4 = [0]", "a6 = [1]", "delta = [3]"],
        ),
    ],
    ids=["five-torsion", "nontorsion", "small cap", "singular", "F5"],
)
def test_classify_prints_label_and_curve(
    capsys: pytest.CaptureFixture[str],
    argv: tuple[str, ...],
    expected: list[str],
) -> None:
    """
    Validates classify prints the torsion label then a4, a6 and delta.
    """
    status, out, _ = run_cli(capsys, "classify", *argv)

    assert status == 0
    assert out.splitlines() == expected


def test_enumerate_lists_the_bound_one_points(
    capsys: pytest.CaptureFixture[str],
) -> None:
    """
    Validates enumerate prints the 17 canonical points with Ht <= 1.
    """
    status, out, _ = run_cli(capsys, "enumerate", "--bound", "1")

    assert status == 0
    lines = out.splitlines()
    assert len(lines) == 17
    assert {tuple(int(c) for c in line.split(",")) for line in lines} == set(
        B1_CLASSES
    )


@pytest.mark.parametrize(
    ("argv", "expected"),
    [
        (("--bound", "1"), "17\n"),
        (("--bound", "1", "--threads", "2"), "17\n"),
        (("--bound", "1/2"), "0\n"),
        (("--field", "5", "--bound", "0"), "39\n"),
    ],
    ids=["serial", "two workers", "below one", "constants over F5"],
)
def test_enumerate_count_only(
    capsys: pytest.CaptureFixture[str], argv: tuple[str, ...], expected: str
) -> None:
    """
    Validates --count-only prints N(B) alone.
    """
    status, out, _ = run_cli(capsys, "enumerate", "--count-only", *argv)

    assert status == 0
    assert out == expected


def test_enumerate_writes_to_out(
    capsys: pytest.CaptureFixture[str], tmp_path: Path
) -> None:
    """
    Validates --out receives the points and stdout stays empty.
    """
    target = tmp_path / "points.txt"

    status, out, _ = run_cli(
        capsys, "enumerate", "--bound", "1", "--out", str(target)
    )

    assert status == 0
    assert out == ""
    assert len(target.read_text(encoding="utf-8").splitlines()) == 17


def test_census_csv(capsys: pytest.CaptureFixture[str]) -> None:
    """
    Validates the B = 1 census row in the canonical CSV format.
    """
    status, out, _ = run_cli(
        capsys, "census", "--bounds", "1", "--cap", "12", "--format", "csv"
    )

    assert status == 0
    assert out == B1_CSV


def test_census_json_is_pure_on_stdout(
    capsys: pytest.CaptureFixture[str],
) -> None:
    """
    Validates JSON output parses as a whole even with progress logging on.
    """
    status, out, err = run_cli(
        capsys, "census", "--bounds", "1,2", "--format", "json", "-v"
    )

    assert status == 0
    records = orjson.loads(out)
    assert [r["bound"] for r in records] == ["1", "2"]
    assert records[0]["n_total"] == 17
    assert "INFO" in err


def test_census_writes_to_out(
    capsys: pytest.CaptureFixture[str], tmp_path: Path
) -> None:
    """
    Validates --out receives the table and nothing goes to stdout.
    """
    target = tmp_path / "census.csv"

    status, out, _ = run_cli(
        capsys, "census", "--bounds", "1", "--out", str(target)
    )

    assert status == 0
    assert out == ""
    assert target.read_text(encoding="utf-8") == B1_CSV
    assert not target.with_name("census.csv.tmp").exists()


def test_census_text_report(capsys: pytest.CaptureFixture[str]) -> None:
    """
    Validates the text format carries the nontorsion fraction summary.
    """
    status, out, _ = run_cli(
        capsys, "census", "--bounds", "1", "--format", "text"
    )

    assert status == 0
    assert "B=1  f=10/17 (0.588235)" in out


def test_census_text_report_below_one(
    capsys: pytest.CaptureFixture[str],
) -> None:
    """
    Validates an empty row below B = 1 prints f=n/a and still exits 0.
    """
    status, out, err = run_cli(
        capsys, "census", "--bounds", "0.5,1", "--format", "text"
    )

    assert status == 0
    assert err == ""
    assert "B=1/2  f=n/a" in out
    assert "B=1  f=10/17 (0.588235)" in out
    assert "growth exponent" not in out


@pytest.mark.parametrize(
    "argv",
    [
        ("height", "--triple", "0,0,0"),
        ("height", "--triple", "1,2"),
        ("normalize", "--field", "3", "--triple", "1,1,1"),
        ("enumerate", "--bound", "abc"),
        ("enumerate",),
        ("census", "--bounds", "2,1"),
        ("census", "--bounds", "1", "--cap", "0"),
        ("census", "--bounds", "1", "--rate", "0.5"),
        ("enumerate", "--bound", "1", "--threads", "-1"),
    ],
    ids=[
        "zero triple",
        "two coordinates",
        "characteristic 3",
        "bad bound",
        "missing bound",
        "decreasing bounds",
        "zero cap",
        "sampling over Q",
        "negative threads",
    ],
)
def test_input_errors_exit_two(
    capsys: pytest.CaptureFixture[str], argv: tuple[str, ...]
) -> None:
    """
    Validates invalid input exits 2 with a message and no data.
    """
    status, out, err = run_cli(capsys, *argv)

    assert status == 2
    assert out == ""
    assert err.startswith("heightcensus: ")


@pytest.mark.parametrize(
    "argv",
    [(), ("frobnicate",), ("census", "--format", "xml", "--bounds", "1")],
    ids=["no command", "unknown command", "unknown format"],
)
def test_usage_errors_exit_two(
    capsys: pytest.CaptureFixture[str], argv: tuple[str, ...]
) -> None:
    """
    Validates argparse usage errors map to exit status 2.
    """
    status, out, _ = run_cli(capsys, *argv)

    assert status == 2
    assert out == ""


def test_version_exits_zero(capsys: pytest.CaptureFixture[str]) -> None:
    """
    Validates --version prints the program name and exits 0.
    """
    status, out, _ = run_cli(capsys, "--version")

    assert status == 0
    assert out.startswith("heightcensus ")


def test_manifest_supplies_options(
    capsys: pytest.CaptureFixture[str], tmp_path: Path
) -> None:
    """
    Validates --config fills in options not given as flags.
    """
    manifest = tmp_path / "census.json"
    manifest.write_bytes(orjson.dumps({"bounds": [1], "cap": 12}))

    status, out, _ = run_cli(capsys, "census", "--config", str(manifest))

    assert status == 0
    assert out == B1_CSV


def test_flags_take_precedence_over_manifest(tmp_path: Path) -> None:
    """
    Validates defaults < manifest < explicit flags.
    """
    manifest = tmp_path / "enumerate.json"
    manifest.write_bytes(
        orjson.dumps({"field": "5", "bound": "3", "threads": 4})
    )

    cfg = parse_config(["enumerate", "--config", str(manifest), "--bound", "1"])

    assert cfg.bounds == (DegreeBound(5, 1),)
    assert cfg.threads == 4
    assert cfg.count_only is False


@pytest.mark.parametrize(
    "content",
    [
        b'{"bounds": "1", "colour": "red"}',
        b"[1, 2]",
        b"{not json",
        b'{"bounds": [1], "threads": "4"}',
        b'{"bounds": [1], "cap": true}',
        b'{"bounds": [1], "rate": "fast"}',
    ],
    ids=[
        "unknown key",
        "not an object",
        "malformed",
        "string threads",
        "boolean cap",
        "string rate",
    ],
)
def test_bad_manifest_exits_two(
    capsys: pytest.CaptureFixture[str], tmp_path: Path, content: bytes
) -> None:
    """
    Validates manifests with unknown keys, bad JSON or mistyped values are
    input errors.
    """
    manifest = tmp_path / "census.json"
    manifest.write_bytes(content)

    status, out, err = run_cli(capsys, "census", "--config", str(manifest))

    assert status == 2
    assert out == ""
    assert "census.json" in err
    assert err.startswith("heightcensus: ")


def test_missing_manifest_exits_two(
    capsys: pytest.CaptureFixture[str], tmp_path: Path
) -> None:
    """
    Validates a --config path that does not exist is an input error.
    """
    missing = tmp_path / "absent.json"

    status, out, err = run_cli(
        capsys, "census", "--bounds", "1", "--config", str(missing)
    )

    assert status == 2
    assert out == ""
    assert err.startswith("heightcensus: ")
    assert "absent.json" in err
