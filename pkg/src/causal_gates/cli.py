"""Command-line front end.

Exit status: 0 when every check passes, 1 when any check fails, 2 on input
errors (bad scenario file, unknown tolerance name, bad flags).
"""

from __future__ import annotations

import argparse
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from pathlib import Path

from . import __version__, report, scenario_io, suites

COMMANDS = ("verify-all", "scenario", "families", "popt", "steering")
COMMAND_SECTIONS = {
    "verify-all": tuple(suites.SUITES),
    "families": ("families",),
    "popt": ("popt",),
    "steering": ("steering",),
}


class InputError(Exception):
    pass


@dataclass
class RunConfig:
    command: str
    scenario_path: str | None = None
    seed: int = 0
    tolerance_overrides: dict = field(default_factory=dict)
    output: str = "-"
    format: str = "json"
    parallel: int = 1


def build_report(config: RunConfig) -> report.Report:
    if config.command not in COMMANDS:
        raise InputError(f"unknown command {config.command!r}")
    if config.seed < 0:
        raise InputError("seed must be a nonnegative integer")
    try:
        tol = suites.Tolerances.with_overrides(config.tolerance_overrides)
    except KeyError as exc:
        raise InputError(exc.args[0]) from None

    rep = report.Report(metadata={
        "command": config.command,
        "seed": config.seed,
        "tolerances": asdict(tol),
        "tolerance_overrides": dict(sorted(config.tolerance_overrides.items())),
        "version": __version__,
    })

    if config.command == "scenario":
        if not config.scenario_path:
            raise InputError("the scenario command needs a scenario file")
        try:
            items = scenario_io.parse_scenario_file(config.scenario_path)
        except scenario_io.ScenarioFormatError as exc:
            raise InputError(str(exc)) from None
        rep.metadata["scenario_file"] = Path(config.scenario_path).name
        rep.extend("timeorder", suites.scenario_suite(items, tol, config.seed))
        return rep

    names = COMMAND_SECTIONS[config.command]

    def run(name):
        return suites.SUITES[name](tol, config.seed)

    if config.parallel > 1:
        with ThreadPoolExecutor(max_workers=config.parallel) as pool:
            results = list(pool.map(run, names))
    else:
        results = [run(n) for n in names]
    for name, records in sorted(zip(names, results)):
        rep.extend(name, records)
    return rep


def run(config: RunConfig) -> int:
    try:
        rep = build_report(config)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    data = report.emit(rep, config.format)
    if config.output == "-":
        sys.stdout.buffer.write(data)
        sys.stdout.flush()
    else:
        Path(config.output).write_bytes(data)
    s = rep.summary
    print(f"{s['checks_passed']}/{s['checks_run']} checks passed", file=sys.stderr)
    return 0 if rep.passed else 1


def _tolerance(text: str) -> tuple[str, float]:
    name, sep, value = text.partition("=")
    if not sep:
        raise argparse.ArgumentTypeError(f"expected name=value, got {text!r}")
    try:
        return name.strip(), float(value)
    except ValueError:
        raise argparse.ArgumentTypeError(f"tolerance {name!r}: {value!r} is not a number") from None


def _uint(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"{text!r} is not an integer") from None
    if v < 0:
        raise argparse.ArgumentTypeError("must be nonnegative")
    return v


def make_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="causal-gates",
        description="Time-order and no-signaling checks for two-qubit local operations.",
    )
    parser.add_argument("--version", action="version", version=__version__)
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=_uint, default=0)
    common.add_argument("--out", default="-", help="output path ('-' for stdout)")
    common.add_argument("--format", choices=("json", "csv"), default="json")
    common.add_argument("--tolerance", type=_tolerance, action="append", default=[],
                        metavar="NAME=VALUE", help="override a named tolerance (repeatable)")
    common.add_argument("--parallel", type=_uint, default=1, metavar="N")
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("verify-all", parents=[common], help="run every suite")
    sc = sub.add_parser("scenario", parents=[common], help="evaluate scenarios from a JSON file")
    sc.add_argument("scenario_path")
    sub.add_parser("families", parents=[common], help="solution families and intersections")
    sub.add_parser("popt", parents=[common], help="POPT certificate for the transposed singlet")
    sub.add_parser("steering", parents=[common], help="no-signaling sweeps")
    return parser


def main(argv=None) -> int:
    parser = make_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code == 0 else 2
    config = RunConfig(
        command=args.command,
        scenario_path=getattr(args, "scenario_path", None),
        seed=args.seed,
        tolerance_overrides=dict(args.tolerance),
        output=args.out,
        format=args.format,
        parallel=max(args.parallel, 1),
    )
    return run(config)


if __name__ == "__main__":
    sys.exit(main())
