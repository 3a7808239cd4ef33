"""
Command-line interface for the q-deformed exciton simulations.

Exit codes: 0 success, 1 failed validation, 2 invalid config or parameters,
3 numerical failure.
"""

import argparse
import logging
import sys
from pathlib import Path

from .config import ScenarioConfig, load_scenarios
from .errors import ConfigError, DegeneracyError, DomainError, NumericalError, ZeroLinewidthError
from .oracle import validate
from .presets import PRESETS, preset
from .runner import ScenarioRunner
from .scenarios import load_builtin_scenarios

EXIT_OK = 0
EXIT_VALIDATION_FAILED = 1
EXIT_INVALID = 2
EXIT_NUMERICAL = 3

SPECTRUM_KINDS = {"single": "single", "qpol": "qpol", "two-mode": "two_mode"}
ABSORB_KINDS = {"linear": "absorption_linear", "third": "absorption_third"}


def _run_scenarios(args: argparse.Namespace, configs: list[ScenarioConfig]) -> int:
    runner = ScenarioRunner(
        handlers=load_builtin_scenarios(),
        out_dir=Path(args.out),
        svg=args.svg,
        jobs=args.jobs,
    )
    results = runner.run(configs)
    print(f"Finished {len(results)} scenario(s) into {args.out}")
    return EXIT_OK


def _load(args: argparse.Namespace, kind: str | None = None) -> list[ScenarioConfig]:
    config_path = Path(args.config)
    if not config_path.exists():
        raise ConfigError(f"Config file not found: {config_path}")
    configs = load_scenarios(config_path)
    if kind is not None:
        configs = [c for c in configs if c.kind == kind]
        if not configs:
            raise ConfigError(f"No '{kind}' scenarios in {config_path}")
    print(f"Loaded {len(configs)} scenario(s) from {config_path}")
    return configs


def cmd_run(args: argparse.Namespace) -> int:
    """Run every scenario in the config file."""
    return _run_scenarios(args, _load(args))


def cmd_spectrum(args: argparse.Namespace) -> int:
    """Run the fluorescence scenarios of one kind."""
    return _run_scenarios(args, _load(args, SPECTRUM_KINDS[args.model]))


def cmd_absorb(args: argparse.Namespace) -> int:
    """Run the absorption scenarios of one order."""
    return _run_scenarios(args, _load(args, ABSORB_KINDS[args.order]))


def cmd_preset(args: argparse.Namespace) -> int:
    """Run the scenario set of a figure preset."""
    configs = preset(args.name)
    print(f"Preset {args.name}: {len(configs)} scenario(s)")
    return _run_scenarios(args, configs)


def cmd_validate(args: argparse.Namespace) -> int:
    """Check closed forms against the oracles and write the report."""
    report = validate(seed=args.seed, draws=args.draws)
    text = report.to_text()

    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    report_path = out_dir / args.report
    report_path.write_text(text)

    print(text, end="")
    print(f"  -> wrote {report_path}")
    if not report.passed:
        print(f"Validation failed: {', '.join(report.failures)}")
        return EXIT_VALIDATION_FAILED
    return EXIT_OK


def run_command(args: argparse.Namespace) -> int:
    """Run the selected command, mapping library errors to exit codes."""
    try:
        return args.func(args)
    except (ConfigError, DomainError, ZeroLinewidthError) as e:
        print(f"Error: {e}", file=sys.stderr)
        return EXIT_INVALID
    except (DegeneracyError, NumericalError) as e:
        print(f"Numerical error: {e}", file=sys.stderr)
        return EXIT_NUMERICAL


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qexciton",
        description="Spectra and absorption of q-deformed excitons in a microcavity",
    )
    parser.add_argument(
        "-c", "--config",
        default="config.yaml",
        help="Path to scenario file (default: config.yaml)",
    )
    parser.add_argument("--out", default="out", help="Output directory (default: out)")
    parser.add_argument("--svg", action="store_true", help="Also write an SVG plot per CSV")
    parser.add_argument("--seed", type=int, default=0, help="Seed for validation sweeps (default: 0)")
    parser.add_argument("--jobs", type=int, default=1, help="Scenarios run concurrently (default: 1)")
    parser.add_argument("-v", "--verbose", action="count", default=0, help="-v info, -vv debug logging")

    subparsers = parser.add_subparsers(dest="command", help="Commands")

    # run command (default)
    run_parser = subparsers.add_parser("run", help="Run every scenario in the config file")
    run_parser.set_defaults(func=cmd_run)

    spectrum_parser = subparsers.add_parser("spectrum", help="Fluorescence spectra")
    spectrum_parser.add_argument("model", choices=sorted(SPECTRUM_KINDS))
    spectrum_parser.set_defaults(func=cmd_spectrum)

    absorb_parser = subparsers.add_parser("absorb", help="Absorption spectra")
    absorb_parser.add_argument("order", choices=sorted(ABSORB_KINDS))
    absorb_parser.set_defaults(func=cmd_absorb)

    preset_parser = subparsers.add_parser("preset", help="Reproduce a figure preset")
    preset_parser.add_argument("name", help=f"One of: {', '.join(sorted(PRESETS))}")
    preset_parser.set_defaults(func=cmd_preset)

    validate_parser = subparsers.add_parser("validate", help="Check closed forms against oracles")
    validate_parser.add_argument("--draws", type=int, default=1000, help="Random draws (default: 1000)")
    validate_parser.add_argument(
        "--report", default="validate_report.txt",
        help="Report file name inside --out (default: validate_report.txt)",
    )
    validate_parser.set_defaults(func=cmd_validate)

    return parser


def main(argv: list[str] | None = None) -> None:
    """Main entry point."""
    args = build_parser().parse_args(argv)

    # Default to 'run' if no command specified
    if args.command is None:
        args.func = cmd_run

    logging.basicConfig(
        level=logging.WARNING - 10 * min(args.verbose, 2),
        format="%(levelname)s %(name)s: %(message)s",
    )

    # Ensure unbuffered output
    if hasattr(sys.stdout, "reconfigure"):
        sys.stdout.reconfigure(line_buffering=True)

    sys.exit(run_command(args))
