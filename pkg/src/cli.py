"""
cli.py
------

Command-line entry point for the qtoric engine. Configuration comes from the
command line plus environment variables (optionally loaded from a ``.env``
file); logging goes to the console and to a file in the log directory.

Commands:
- ``analyze``  stability verdict, fixed points, sectors with Betti numbers, semi-positivity
- ``classes``  the I-contributing curve classes with loop-space dimensions
- ``iseries``  small / twisted / big / Givental I-functions, optionally checked inline
- ``check``    the verification block only
- ``selftest`` the acceptance battery

Exit codes: 0 ok, 2 stability failure, 3 input error, 4 check failure.
"""
from __future__ import annotations

import argparse
import json
import logging
import os
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Any

from dotenv import load_dotenv

from .audit import build_run_record, record_run
from .checks import all_passed, run_series_checks
from .cohomology import build_sector_ring
from .curve_classes import enumerate_effective, semipositivity_report
from .errors import ConsistencyError, InputError, PreconditionError, StabilityError
from .exactmath import parse_rational
from .executors import executor_from_env
from .git_model import check_ss_equals_s, load_presentation, require_stable
from .iseries import (
    TwistData,
    big_i,
    build_insertion,
    givental_small_i,
    mirror_map,
    small_i,
    twisted_small_i,
)
from .render import (
    analysis_to_json,
    analysis_to_pretty,
    checks_to_json,
    checks_to_pretty,
    classes_to_json,
    classes_to_pretty,
    dump_json,
    mirror_to_json,
    mirror_to_pretty,
    series_to_json,
    series_to_pretty,
)
from .sectors import enumerate_sectors, sector_of_class
from .selftest import build_markdown_summary, run_selftest

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_STABILITY = 2
EXIT_INPUT = 3
EXIT_CHECK = 4

COMMANDS = ("analyze", "classes", "iseries", "check", "selftest")


def repo_root() -> Path:
    return Path(__file__).resolve().parent.parent


def configure_logging() -> None:
    """Configure logging for console and file outputs."""
    logs_dir = Path(os.getenv("QTORIC_LOG_DIR", "").strip() or repo_root() / "logs")
    logs_dir.mkdir(parents=True, exist_ok=True)
    level_name = os.getenv("QTORIC_LOG_LEVEL", "INFO").strip().upper() or "INFO"
    level = getattr(logging, level_name, None)
    if not isinstance(level, int):
        level = logging.INFO

    logging.basicConfig(
        level=level,
        format="%(asctime)s [%(levelname)s] %(name)s: %(message)s",
        handlers=[
            logging.StreamHandler(),
            logging.FileHandler(logs_dir / "qtoric.log"),
        ],
    )


@dataclass(frozen=True)
class RunConfig:
    """Validated configuration of one CLI invocation."""

    command: str
    model: Path | None = None
    d_max: Fraction = Fraction(2)
    t_order: int = 1
    z_window: tuple[int, int] | None = None
    twist: tuple[tuple[int, ...], ...] = ()
    insertions: tuple[tuple[str, str], ...] = ()
    big: bool = False
    givental: bool = False
    absorb_q_rescaling: bool = False
    mirror: bool = False
    check: bool = False
    output_format: str = "json"
    out: Path | None = None
    names: tuple[str, ...] | None = None
    max_degree: int | None = None
    cases: Path | None = None
    models_dir: Path | None = None

    def __post_init__(self) -> None:
        if self.command not in COMMANDS:
            raise InputError(f"unknown command {self.command!r}")
        if self.d_max < 0:
            raise InputError(f"--d-max must be nonnegative, got {self.d_max}")
        if self.t_order < 0:
            raise InputError(f"--t-order must be nonnegative, got {self.t_order}")
        if self.z_window is not None and self.z_window[0] > self.z_window[1]:
            raise InputError(f"--z-min {self.z_window[0]} exceeds --z-max {self.z_window[1]}")
        if self.output_format not in ("json", "pretty"):
            raise InputError(f"--format must be json or pretty, got {self.output_format!r}")
        if self.command != "selftest" and self.model is None:
            raise InputError(f"{self.command} needs --model PATH")
        if self.big and self.givental:
            raise InputError("--big and --givental are mutually exclusive")
        if self.max_degree is not None and self.max_degree < 0:
            raise InputError("--max-degree must be nonnegative")

    @property
    def flavor(self) -> str:
        if self.givental:
            return "givental"
        if self.big:
            return "big"
        return "twisted" if self.twist else "small"


@dataclass
class CommandResult:
    """What a command hands back to ``main`` for output and auditing."""

    document: dict[str, Any]
    text: str
    exit_code: int = EXIT_OK
    model_name: str | None = None
    term_count: int = 0
    checks_passed: bool | None = None
    extra: dict[str, Any] = field(default_factory=dict)


class _Parser(argparse.ArgumentParser):
    def error(self, message: str) -> None:  # type: ignore[override]
        raise InputError(message)


def parse_twist(text: str) -> tuple[tuple[int, ...], ...]:
    """``"3"`` / ``"3,2"`` (rank 1) or ``"[1,0],[0,2]"`` into a tuple of characters."""
    try:
        items = json.loads(f"[{text}]")
    except json.JSONDecodeError as exc:
        raise InputError(f"--twist {text!r} is not a list of characters") from exc
    characters = []
    for item in items:
        if isinstance(item, bool):
            raise InputError(f"--twist entry {item!r} is not an integer character")
        if isinstance(item, int):
            characters.append((item,))
        elif isinstance(item, list) and item and all(
            isinstance(value, int) and not isinstance(value, bool) for value in item
        ):
            characters.append(tuple(item))
        else:
            raise InputError(f"--twist entry {item!r} is not an integer character")
    if not characters:
        raise InputError("--twist needs at least one character")
    return tuple(characters)


def parse_insertion_flag(text: str) -> tuple[str, str]:
    name, sep, poly = text.partition(":")
    if not sep or not name.strip() or not poly.strip():
        raise InputError(f"--insert expects NAME:POLY, got {text!r}")
    return name.strip(), poly.strip()


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--model", type=Path)
    common.add_argument("--d-max", default="2")
    common.add_argument("--format", dest="output_format", default="json")
    common.add_argument("--out", type=Path)
    common.add_argument("--names")
    common.add_argument("--max-degree", type=int)

    series = _Parser(add_help=False)
    series.add_argument("--z", dest="z_mode", default="auto")
    series.add_argument("--z-min", type=int)
    series.add_argument("--z-max", type=int)
    series.add_argument("--twist")
    series.add_argument("--big", action="store_true")
    series.add_argument("--givental", action="store_true")
    series.add_argument("--absorb-q-rescaling", action="store_true")
    series.add_argument("--insert", action="append", default=[])
    series.add_argument("--t-order", type=int, default=1)
    series.add_argument("--mirror", action="store_true")
    series.add_argument("--check", action="store_true")

    parser = _Parser(prog="qtoric", description="Quasimap I-functions of toric stacks.")
    commands = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    commands.add_parser("analyze", parents=[common])
    commands.add_parser("classes", parents=[common])
    commands.add_parser("iseries", parents=[common, series])
    commands.add_parser("check", parents=[common])
    selftest = commands.add_parser("selftest")
    selftest.add_argument("--cases", type=Path)
    selftest.add_argument("--models-dir", type=Path)
    selftest.add_argument("--out", type=Path)
    return parser


def build_config(argv: list[str] | None = None) -> RunConfig:
    """Parse and validate command-line flags; raises ``InputError`` on bad values."""
    args = build_parser().parse_args(argv)
    if args.command == "selftest":
        return RunConfig(
            command="selftest", cases=args.cases, models_dir=args.models_dir, out=args.out
        )

    z_window = None
    if args.command == "iseries":
        if (args.z_min is None) != (args.z_max is None):
            raise InputError("--z-min and --z-max must be given together")
        if args.z_min is not None:
            z_window = (args.z_min, args.z_max)
        elif args.z_mode != "auto":
            raise InputError(f"--z accepts only 'auto', got {args.z_mode!r}")

    names = None
    if args.names:
        names = tuple(part.strip() for part in args.names.split(",") if part.strip())

    return RunConfig(
        command=args.command,
        model=args.model,
        d_max=parse_rational(args.d_max),
        t_order=getattr(args, "t_order", 1),
        z_window=z_window,
        twist=parse_twist(args.twist) if getattr(args, "twist", None) else (),
        insertions=tuple(parse_insertion_flag(item) for item in getattr(args, "insert", [])),
        big=getattr(args, "big", False),
        givental=getattr(args, "givental", False),
        absorb_q_rescaling=getattr(args, "absorb_q_rescaling", False),
        mirror=getattr(args, "mirror", False),
        check=getattr(args, "check", False),
        output_format=args.output_format,
        out=args.out,
        names=names,
        max_degree=args.max_degree,
    )


def cmd_analyze(config: RunConfig) -> CommandResult:
    presentation = load_presentation(config.model)
    report = check_ss_equals_s(presentation)
    if not report.ss_equals_s:
        document = analysis_to_json(presentation, report, [], None)
        logger.error("Model %s fails W^ss = W^s: %s", presentation.name, report.reason)
        return CommandResult(
            document, analysis_to_pretty(document), EXIT_STABILITY, presentation.name
        )
    rings = [
        build_sector_ring(presentation, sector, config.max_degree)
        for sector in enumerate_sectors(presentation)
    ]
    semipositivity = semipositivity_report(presentation, config.d_max)
    document = analysis_to_json(presentation, report, rings, semipositivity)
    return CommandResult(document, analysis_to_pretty(document), model_name=presentation.name)


def cmd_classes(config: RunConfig) -> CommandResult:
    presentation = load_presentation(config.model)
    classes = enumerate_effective(presentation, config.d_max, executor=executor_from_env())
    sectors = [sector_of_class(presentation, beta) for beta in classes]
    document = classes_to_json(presentation, classes, sectors)
    return CommandResult(
        document,
        classes_to_pretty(document),
        model_name=presentation.name,
        term_count=len(classes),
    )


def _series(config: RunConfig, presentation):
    executor = executor_from_env()
    twist = TwistData(config.twist) if config.twist else None
    options = {"max_degree": config.max_degree, "executor": executor}
    if config.givental:
        if twist is not None:
            raise InputError("--givental does not combine with --twist")
        return givental_small_i(
            presentation,
            config.d_max,
            config.t_order,
            absorb_q_rescaling=config.absorb_q_rescaling,
            z_window=config.z_window,
            **options,
        )
    if config.big:
        insertion = build_insertion(
            presentation, config.insertions, config.t_order, config.names
        )
        return big_i(
            presentation, config.d_max, insertion, config.z_window, twist=twist, **options
        )
    if config.insertions:
        raise InputError("--insert requires --big")
    if twist is not None:
        return twisted_small_i(presentation, twist, config.d_max, config.z_window, **options)
    return small_i(presentation, config.d_max, config.z_window, **options)


def cmd_iseries(config: RunConfig) -> CommandResult:
    presentation = load_presentation(config.model)
    require_stable(presentation)

    if config.mirror:
        mirror = mirror_map(
            presentation,
            config.d_max,
            max_degree=config.max_degree,
            executor=executor_from_env(),
        )
        document = mirror_to_json(mirror, config.names)
        return CommandResult(
            document,
            mirror_to_pretty(document),
            model_name=presentation.name,
            term_count=len(mirror.series.terms),
        )

    series = _series(config, presentation)
    document = series_to_json(series, config.names)
    text = series_to_pretty(series, config.names)
    result = CommandResult(
        document, text, model_name=presentation.name, term_count=len(series.terms)
    )
    if config.check:
        decisions = run_series_checks(
            presentation,
            config.d_max,
            series=series,
            max_degree=config.max_degree,
            executor=executor_from_env(),
        )
        verification = checks_to_json(decisions)
        document["verification"] = verification
        result.text = text + checks_to_pretty(verification)
        result.checks_passed = verification["passed"]
        if not verification["passed"]:
            result.exit_code = EXIT_CHECK
    return result


def cmd_check(config: RunConfig) -> CommandResult:
    presentation = load_presentation(config.model)
    require_stable(presentation)
    decisions = run_series_checks(
        presentation,
        config.d_max,
        max_degree=config.max_degree,
        executor=executor_from_env(),
    )
    document = {"model": presentation.name, "verification": checks_to_json(decisions)}
    passed = all_passed(decisions)
    return CommandResult(
        document,
        checks_to_pretty(document["verification"]),
        EXIT_OK if passed else EXIT_CHECK,
        presentation.name,
        checks_passed=passed,
    )


def cmd_selftest(config: RunConfig) -> CommandResult:
    results = run_selftest(config.cases, config.models_dir, config.out)
    passed = all(result.passed for result in results)
    document = {
        "passed": passed,
        "note": None if results else "no models",
        "cases": [
            {
                "case_id": result.case_id,
                "criterion": result.criterion,
                "model": result.model,
                "passed": result.passed,
                "detail": result.detail,
            }
            for result in results
        ],
    }
    return CommandResult(
        document,
        build_markdown_summary(results),
        EXIT_OK if passed else EXIT_CHECK,
        term_count=len(results),
        checks_passed=passed,
    )


HANDLERS = {
    "analyze": cmd_analyze,
    "classes": cmd_classes,
    "iseries": cmd_iseries,
    "check": cmd_check,
    "selftest": cmd_selftest,
}


def _emit(config: RunConfig, result: CommandResult) -> None:
    if config.command == "selftest":
        print(result.text, end="")
        return
    payload = dump_json(result.document) if config.output_format == "json" else result.text
    if config.out is not None:
        config.out.parent.mkdir(parents=True, exist_ok=True)
        config.out.write_text(payload, encoding="utf-8")
        logger.info("Wrote %s output to %s", config.command, config.out)
    else:
        print(payload, end="")


def run(config: RunConfig) -> int:
    """Execute one configured command and return its exit code."""
    result: CommandResult | None = None
    try:
        result = HANDLERS[config.command](config)
        _emit(config, result)
        exit_code = result.exit_code
    except StabilityError as exc:
        logger.error("Stability failure: %s (witness %s)", exc, exc.witness)
        exit_code = EXIT_STABILITY
    except (InputError, PreconditionError) as exc:
        logger.error("Input error: %s", exc)
        exit_code = EXIT_INPUT
    except ConsistencyError as exc:
        logger.error("Internal check failed: %s", exc)
        exit_code = EXIT_CHECK

    record_run(
        build_run_record(
            command=config.command,
            model_name=result.model_name if result else (config.model.stem if config.model else None),
            d_max=config.d_max if config.command != "selftest" else None,
            flavor=config.flavor if config.command == "iseries" else None,
            term_count=result.term_count if result else 0,
            checks_passed=result.checks_passed if result else None,
            exit_code=exit_code,
        )
    )
    return exit_code


def main(argv: list[str] | None = None) -> int:
    load_dotenv()
    configure_logging()
    try:
        config = build_config(argv)
    except InputError as exc:
        logger.error("Invalid arguments: %s", exc)
        return EXIT_INPUT
    logger.info("Running %s", config.command)
    return run(config)


if __name__ == "__main__":
    raise SystemExit(main())
