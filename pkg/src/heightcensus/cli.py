"""
Command-line interface: ``heightcensus <command> [options]``.

Commands: height, normalize, classify, enumerate, census. Data goes to
stdout (or ``--out``); diagnostics and logs go to stderr. Exit status is 0
on success, 2 on usage or input errors and 1 on anything else.

Options may also come from a JSON manifest given with ``--config``. Its
keys are the long option names with dashes replaced by underscores, and
options given on the command line take precedence over it.
"""

from __future__ import annotations

import argparse
import logging
import sys
import traceback
from collections.abc import Sequence
from dataclasses import dataclass
from pathlib import Path
from typing import Any
from typing import Literal
from typing import TextIO

import orjson

from . import __version__
from .curves import classify_triple
from .curves import discriminant
from .curves import to_marked_curve
from .enumerate import HeightBound
from .enumerate import count_points
from .enumerate import enumerate_points
from .enumerate import parse_bound
from .enumerate import resolve_workers
from .errors import CensusInputError
from .errors import ConfigError
from .fields import RATIONALS
from .fields import GlobalFieldCtx
from .heights import WeightedTriple
from .heights import height12
from .heights import normalize
from .stats import OUTPUT_FORMATS
from .stats import ExperimentConfig
from .stats import OutputFormat
from .stats import format_rows
from .stats import run_census

logger = logging.getLogger(__name__)

type Command = Literal["height", "normalize", "classify", "enumerate", "census"]

COMMANDS: tuple[Command, ...] = (
    "height",
    "normalize",
    "classify",
    "enumerate",
    "census",
)

_TRIPLE_COMMANDS = frozenset({"height", "normalize", "classify"})

_DEFAULTS: dict[str, Any] = {
    "field": "Q",
    "triple": None,
    "bound": None,
    "bounds": None,
    "cap": None,
    "threads": 1,
    "out": None,
    "format": "csv",
    "count_only": False,
    "rate": 1.0,
    "seed": 0,
    "exclude_singular": False,
    "no_fast_paths": False,
    "verbose": 0,
}

_handler: logging.Handler | None = None


@dataclass(frozen=True)
class CliConfig:
    """Validated options of one invocation."""

    command: Command
    field: GlobalFieldCtx = RATIONALS
    triple: str | None = None
    bounds: tuple[HeightBound, ...] = ()
    cap: int | None = None
    threads: int = 1
    output: Path | None = None
    format: OutputFormat = "csv"
    count_only: bool = False
    rate: float = 1.0
    seed: int = 0
    include_singular: bool = True
    fast_paths: bool = True
    verbosity: int = 0

    def __post_init__(self) -> None:
        if self.command not in COMMANDS:
            raise ConfigError(f"unknown command {self.command!r}")
        if self.command in _TRIPLE_COMMANDS and self.triple is None:
            raise ConfigError(f"{self.command} needs --triple")
        if self.command == "enumerate" and len(self.bounds) != 1:
            raise ConfigError("enumerate needs exactly one --bound")
        if self.command == "census" and not self.bounds:
            raise ConfigError("census needs --bounds")
        if self.cap is not None and self.cap < 1:
            raise ConfigError(f"--cap must be >= 1, got {self.cap}")
        if self.threads < 0:
            raise ConfigError(f"--threads must be >= 0, got {self.threads}")
        if self.format not in OUTPUT_FORMATS:
            raise ConfigError(f"unknown format {self.format!r}")

    @classmethod
    def from_options(
        cls, command: Command, options: dict[str, Any]
    ) -> CliConfig:
        """Builds the config from merged flag and manifest values."""
        field = GlobalFieldCtx.from_selector(str(options["field"]))
        bounds: tuple[HeightBound, ...] = ()
        if options["bound"] is not None:
            bounds = (parse_bound(str(options["bound"]), field),)
        elif options["bounds"] is not None:
            raw = options["bounds"]
            texts = raw.split(",") if isinstance(raw, str) else raw
            bounds = tuple(parse_bound(str(b), field) for b in texts)
        out = options["out"]
        return cls(
            command=command,
            field=field,
            triple=options["triple"],
            bounds=bounds,
            cap=options["cap"],
            threads=options["threads"],
            output=Path(out) if out is not None else None,
            format=options["format"],
            count_only=bool(options["count_only"]),
            rate=float(options["rate"]),
            seed=options["seed"],
            include_singular=not options["exclude_singular"],
            fast_paths=not options["no_fast_paths"],
            verbosity=options["verbose"],
        )


def _build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(
        add_help=False, argument_default=argparse.SUPPRESS
    )
    common.add_argument(
        "--field",
        help="Q (default) or a prime q >= 5 for F_q(t)",
    )
    common.add_argument("--config", type=Path, help="JSON manifest of options")
    common.add_argument(
        "-v",
        "--verbose",
        action="count",
        help="-v for progress, -vv for debug output on stderr",
    )

    parser = argparse.ArgumentParser(
        prog="heightcensus",
        description="Heights, enumeration and torsion census on P(2,3,4).",
        argument_default=argparse.SUPPRESS,
    )
    parser.add_argument(
        "--version", action="version", version=f"%(prog)s {__version__}"
    )
    commands = parser.add_subparsers(dest="command", required=True)

    for name, text in (
        ("height", "print Ht**12 over Q, or q^m with Ht = q^m over F_q(t)"),
        ("normalize", "print the canonical representative"),
        ("classify", "print singular, order N or nontorsion(cap=N)"),
    ):
        sub = commands.add_parser(
            name,
            parents=[common],
            help=text,
            argument_default=argparse.SUPPRESS,
        )
        sub.add_argument("--triple", help='"x0,x1,x2"; use --triple=-1,0,0')
        if name == "classify":
            sub.add_argument("--cap", type=int, help="torsion order cap")
            sub.add_argument(
                "--no-fast-paths",
                action="store_true",
                help="decide by multiples only",
            )

    enum = commands.add_parser(
        "enumerate",
        parents=[common],
        help="list canonical points with Ht <= B",
        argument_default=argparse.SUPPRESS,
    )
    enum.add_argument("--bound", help="B over Q; d or q^d over F_q(t)")
    enum.add_argument("--threads", type=int, help="workers; 0 = all CPUs")
    enum.add_argument("--out", help="write points to this file")
    enum.add_argument(
        "--count-only", action="store_true", help="print N(B) only"
    )

    census = commands.add_parser(
        "census",
        parents=[common],
        help="torsion census over a list of bounds",
        argument_default=argparse.SUPPRESS,
    )
    census.add_argument("--bounds", help="comma-separated increasing bounds")
    census.add_argument("--cap", type=int, help="torsion order cap")
    census.add_argument("--threads", type=int, help="workers; 0 = all CPUs")
    census.add_argument("--out", help="write the table to this file")
    census.add_argument("--format", choices=OUTPUT_FORMATS)
    census.add_argument(
        "--rate", type=float, help="F_q(t) torsion sampling rate in (0, 1]"
    )
    census.add_argument("--seed", type=int, help="sampling seed")
    census.add_argument(
        "--exclude-singular",
        action="store_true",
        help="leave singular points out of the nontorsion density denominator",
    )
    census.add_argument(
        "--no-fast-paths",
        action="store_true",
        help="classify by multiples only",
    )
    return parser


_MANIFEST_TYPES: dict[str, tuple[type, ...]] = {
    "field": (str, int),
    "triple": (str,),
    "bound": (str, int, float),
    "bounds": (str, list),
    "cap": (int,),
    "threads": (int,),
    "out": (str,),
    "format": (str,),
    "count_only": (bool,),
    "rate": (int, float),
    "seed": (int,),
    "exclude_singular": (bool,),
    "no_fast_paths": (bool,),
    "verbose": (int,),
}


def _check_manifest_value(path: Path, key: str, value: Any) -> None:
    expected = _MANIFEST_TYPES[key]
    if value is None and _DEFAULTS[key] is None:
        return
    if isinstance(value, bool) and bool not in expected:
        ok = False
    else:
        ok = isinstance(value, expected)
    if not ok:
        names = " or ".join(t.__name__ for t in expected)
        raise ConfigError(f"{path}: {key} must be {names}, got {value!r}")


def _read_manifest(path: Path) -> dict[str, Any]:
    try:
        manifest = orjson.loads(path.read_bytes())
    except OSError as e:
        raise ConfigError(f"cannot read {path}: {e.strerror}") from e
    except orjson.JSONDecodeError as e:
        raise ConfigError(f"{path} is not valid JSON: {e}") from e
    if not isinstance(manifest, dict):
        raise ConfigError(f"{path} must hold a JSON object")
    unknown = set(manifest) - set(_DEFAULTS)
    if unknown:
        raise ConfigError(f"{path}: unknown keys {sorted(unknown)}")
    for key, value in manifest.items():
        _check_manifest_value(path, key, value)
    return manifest


def parse_config(argv: Sequence[str] | None = None) -> CliConfig:
    """Parses argv; defaults < --config manifest < explicit flags."""
    namespace = vars(_build_parser().parse_args(argv))
    command = namespace.pop("command")
    manifest_path = namespace.pop("config", None)
    manifest = _read_manifest(manifest_path) if manifest_path else {}
    options = {**_DEFAULTS, **manifest, **namespace}
    return CliConfig.from_options(command, options)


def _configure_logging(verbosity: int) -> None:
    global _handler
    root = logging.getLogger("heightcensus")
    if _handler is not None:
        root.removeHandler(_handler)
    _handler = logging.StreamHandler(sys.stderr)
    _handler.setFormatter(
        logging.Formatter("%(levelname)s %(name)s: %(message)s")
    )
    root.addHandler(_handler)
    levels = (logging.WARNING, logging.INFO, logging.DEBUG)
    root.setLevel(levels[min(verbosity, 2)])


def _run_triple_command(cfg: CliConfig, out: TextIO) -> None:
    x = WeightedTriple.parse(cfg.triple or "", cfg.field)
    if cfg.command == "height":
        out.write(f"{height12(x)}\n")
    elif cfg.command == "normalize":
        out.write(f"{normalize(x)}\n")
    else:
        label = classify_triple(x, cfg.cap, fast_paths=cfg.fast_paths)
        c = to_marked_curve(x)
        fmt = cfg.field.format_element
        out.write(f"{label}\n")
        out.write(f"a4 = {fmt(c.a4)}\n")
        out.write(f"a6 = {fmt(c.a6)}\n")
        out.write(f"delta = {fmt(discriminant(c))}\n")


def _run_enumerate(cfg: CliConfig, out: TextIO) -> None:
    (bound,) = cfg.bounds
    workers = resolve_workers(cfg.threads)
    if cfg.count_only:
        out.write(f"{count_points(bound, workers=workers)}\n")
        return
    count = 0
    for x in enumerate_points(bound, workers=workers):
        out.write(f"{x}\n")
        count += 1
    logger.info("%d points with Ht <= %s", count, bound)


def _run_census(cfg: CliConfig, out: TextIO) -> None:
    experiment = ExperimentConfig(
        field=cfg.field,
        bounds=cfg.bounds,
        cap=cfg.cap,
        workers=cfg.threads,
        output=cfg.output,
        format=cfg.format,
        rate=cfg.rate,
        seed=cfg.seed,
        include_singular=cfg.include_singular,
        fast_paths=cfg.fast_paths,
    )
    rows = run_census(experiment)
    if cfg.output is None:
        out.write(
            format_rows(
                rows,
                cfg.format,
                field=cfg.field,
                include_singular=cfg.include_singular,
            )
        )


def run(cfg: CliConfig, out: TextIO) -> None:
    """Executes a validated configuration, writing data to out."""
    if cfg.command in _TRIPLE_COMMANDS:
        _run_triple_command(cfg, out)
    elif cfg.command == "enumerate":
        if cfg.output is not None:
            with cfg.output.open("w", encoding="utf-8") as f:
                _run_enumerate(cfg, f)
        else:
            _run_enumerate(cfg, out)
    else:
        _run_census(cfg, out)


def _report(e: BaseException) -> None:
    sys.stderr.write("heightcensus: ")
    sys.stderr.write("".join(traceback.format_exception_only(e)))


def main(argv: Sequence[str] | None = None) -> int:
    """Entry point; returns the process exit status."""
    try:
        cfg = parse_config(argv)
        _configure_logging(cfg.verbosity)
        run(cfg, sys.stdout)
    except SystemExit as e:
        # argparse: 0 after --help or --version, 2 on usage errors
        return e.code if isinstance(e.code, int) else 2
    except CensusInputError as e:
        _report(e)
        return 2
    except Exception as e:
        logger.debug("internal error", exc_info=True)
        _report(e)
        return 1
    return 0


__all__ = [
    "COMMANDS",
    "CliConfig",
    "Command",
    "main",
    "parse_config",
    "run",
]
