#!/usr/bin/env python3
"""
Clapp Chaos CLI.

Command-line interface for the oscillator analyses. Every analysis
subcommand writes `<subcommand>.csv` to the output directory and prints a
one-line summary.

Usage:
    clapp-chaos eigs
    clapp-chaos sweep --set sweep_lo=1 --set sweep_hi=500 --out results
    clapp-chaos boundary --config chaos.cfg --set boundary_lo=1 --set boundary_hi=100
    clapp-chaos lyapunov --config chaos.cfg -v
    clapp-chaos config --dump

Exit codes:
    0  success
    1  input error (bad config, parameters, files, bracket)
    2  numeric error (overflow, non-convergence, integration failure)
"""

import argparse
import logging
import sys
from typing import Optional

from clapp_chaos.config.settings import RunConfig
from clapp_chaos.core.exceptions import ClappError
from clapp_chaos.core.runner import SUBCOMMANDS, run_subcommand
from clapp_chaos.parsers.config_parser import resolve_config

logger = logging.getLogger(__name__)

SUBCOMMAND_HELP = {
    "fit": "Fit (I_S, eta) to an I-V characteristic",
    "equilibrium": "Solve the equilibrium point",
    "eigs": "Eigenvalues of the Jacobian at the equilibrium",
    "simulate": "Integrate the state equations from the perturbed equilibrium",
    "phase": "Phase-plane projection of a simulated trajectory",
    "sweep": "Largest eigenvalue real part over an R_E grid",
    "boundary": "Locate the R_E instability boundary by bisection",
    "lyapunov": "Largest Lyapunov exponent",
    "freq": "Resonant frequency of the tank (both modes)",
    "calibrate": "Calibrate beta against the reference eigenvalue real parts",
}


def _load_config(args) -> Optional[RunConfig]:
    """Resolve the configuration, printing the error on failure."""
    overrides = list(args.set)
    if args.out:
        overrides.append(f"output_dir={args.out}")
    try:
        config = resolve_config(args.config, overrides)
    except ClappError as e:
        print(f"Configuration error: {e}", file=sys.stderr)
        return None
    return config


def cmd_analysis(args) -> int:
    """Run one analysis subcommand."""
    config = _load_config(args)
    if config is None:
        return 1
    flags = {"seed": args.seed, "manifest": args.manifest}
    return run_subcommand(args.command, config, flags)


def cmd_config(args) -> int:
    """Validate and optionally dump the resolved configuration."""
    config = _load_config(args)
    if config is None:
        return 1

    if args.dump:
        sys.stdout.write(config.dump())
        return 0

    is_valid, errors = config.validate()
    if is_valid:
        print("Configuration is valid!")
        print(f"\nOperating point: r_e={config.r_e:g} ohm, beta={config.beta:g}, "
              f"v_cc={config.v_cc:g} V")
        print(f"Output directory: {config.output_dir}")
        return 0
    print("Configuration validation failed:")
    for error in errors:
        print(f"  - {error}")
    return 1


def _add_common_arguments(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", "-c", help="Configuration file (key = value)")
    parser.add_argument("--out", "-o", help="Output directory (overrides output_dir)")
    parser.add_argument(
        "--set", "-s",
        action="append",
        default=[],
        metavar="KEY=VALUE",
        help="Override a configuration key (repeatable)",
    )
    parser.add_argument(
        "--seed",
        type=int,
        help="Seed recorded in the manifest; the analyses themselves are deterministic",
    )
    parser.add_argument("--verbose", "-v", action="store_true", help="Debug logging")


def build_parser() -> argparse.ArgumentParser:
    """Argument parser with one subparser per subcommand."""
    parser = argparse.ArgumentParser(
        prog="clapp-chaos",
        description="Clapp oscillator chaos toolkit",
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    subparsers = parser.add_subparsers(dest="command", help="Available commands")

    for name in SUBCOMMANDS:
        sub = subparsers.add_parser(name, help=SUBCOMMAND_HELP[name])
        _add_common_arguments(sub)
        sub.add_argument(
            "--manifest",
            action="store_true",
            help="Also write manifest.json with config, results and checksums",
        )
        sub.set_defaults(func=cmd_analysis)

    # Config command
    config_parser = subparsers.add_parser("config", help="Validate or dump the configuration")
    _add_common_arguments(config_parser)
    config_parser.add_argument(
        "--dump",
        action="store_true",
        help="Print the resolved configuration in normalized key = value form",
    )
    config_parser.set_defaults(func=cmd_config)

    return parser


def main(argv: Optional[list[str]] = None) -> int:
    """Main entry point."""
    parser = build_parser()
    args = parser.parse_args(argv)

    if args.command is None:
        parser.print_help()
        return 0

    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
    )
    if args.seed is not None:
        logger.debug("seed %d recorded; analyses are deterministic", args.seed)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
