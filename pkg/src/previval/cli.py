"""Command-line front end.

    previval figure <preset> -o out.csv
    previval run -c scenario.cfg -o out.csv [--validate]
    previval check

Exit codes: 0 success, 1 internal or I/O error (or a failed validation),
2 configuration error, 3 zero-probability conditioning.
"""
from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

import numpy as np

from . import __version__, _kernels
from .analysis import ScanResult, scan
from .errors import ConfigError, InvalidStateError, ZeroProbabilityError
from .scenarios import PRESETS, Scenario, fmt, parse_config
from .validation import full_check, validate_scenario

log = logging.getLogger("previval")

EXIT_OK, EXIT_ERROR, EXIT_CONFIG, EXIT_ZERO_PROB = 0, 1, 2, 3


def render_csv(scenario: Scenario, result: ScanResult) -> str:
    """CSV text: parameter echo as ``#`` comments, header, one row per defined point."""
    lines = [f"# {line}" for line in scenario.parameter_lines()]
    lines.append("lambda_tau,probability")
    for t, v in zip(result.lambda_tau, result.values):
        if not np.isnan(v):
            lines.append(f"{fmt(t)},{fmt(v)}")
    return "\n".join(lines) + "\n"


def _emit(scenario: Scenario, output: Path) -> int:
    result = scan(None, scenario.grid, scenario)
    text = render_csv(scenario, result)
    with open(output, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)
    gaps = result.gaps
    if gaps.size:
        shown = ", ".join(fmt(t) for t in gaps[:5])
        more = f" (and {gaps.size - 5} more)" if gaps.size > 5 else ""
        print(f"error: zero-probability conditioning at lambda_tau = {shown}{more}; "
              f"those rows were omitted from {output}", file=sys.stderr)
        return EXIT_ZERO_PROB
    return EXIT_OK


def cmd_figure(args) -> int:
    return _emit(PRESETS[args.preset], Path(args.output))


def cmd_run(args) -> int:
    try:
        text = Path(args.config).read_text(encoding="utf-8")
    except OSError as exc:
        print(f"error: cannot read config: {exc}", file=sys.stderr)
        return EXIT_ERROR
    try:
        scenario = parse_config(text)
    except ConfigError as exc:
        print(f"{args.config}: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    status = _emit(scenario, Path(args.output))
    if args.validate:
        checks = validate_scenario(scenario)
        for c in checks:
            print(c.line())
        if status == EXIT_OK and not all(c.passed for c in checks):
            status = EXIT_ERROR
    return status


def cmd_check(args) -> int:
    print(f"kernel backend: {_kernels.BACKEND}")
    checks = full_check()
    for c in checks:
        print(c.line())
    return EXIT_OK if all(c.passed for c in checks) else EXIT_ERROR


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="previval",
        description="Predictive and retrodictive Jaynes-Cummings curves.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("figure", help="write the curve of a figure preset")
    p.add_argument("preset", choices=sorted(PRESETS))
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(func=cmd_figure)

    p = sub.add_parser("run", help="scan a scenario from a key = value config file")
    p.add_argument("-c", "--config", required=True)
    p.add_argument("-o", "--output", required=True)
    p.add_argument("--validate", action="store_true",
                   help="also check Bayes and oracle equivalence on this scenario")
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("check", help="run the full Bayes + oracle validation sweep")
    p.set_defaults(func=cmd_check)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    log.debug("kernel backend: %s", _kernels.BACKEND)
    try:
        return args.func(args)
    except ZeroProbabilityError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ZERO_PROB
    except InvalidStateError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
