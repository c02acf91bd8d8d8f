"""
Clapp Oscillator Chaos Toolkit.

Equilibrium, linear stability, time integration and chaos diagnostics for a
single-transistor Clapp oscillator driven into chaos by its emitter
resistance.

Architecture:
    clapp_chaos/
    ├── core/           # Shared types, errors, runner and Spark session
    ├── model/          # BJT current laws, state equations, I-V fitting
    ├── solvers/        # Safeguarded root finders, Dormand-Prince integrator
    ├── analysis/       # Equilibrium, stability, integration, chaos sweeps
    ├── parsers/        # Config and I-V CSV input formats
    ├── validators/     # CSV output checks
    ├── utils/          # Files and SI quantities
    └── config/         # Run configuration

Usage:
    from clapp_chaos import get_published_config, solve_equilibrium, stability_report

    config = get_published_config()
    eq = solve_equilibrium(config.circuit, config.bjt)
    report = stability_report(config.circuit, config.bjt, eq)
"""

__version__ = "1.0.0"

from clapp_chaos.analysis import (
    calibrate_beta,
    find_instability_boundary,
    largest_lyapunov,
    simulate,
    solve_equilibrium,
    stability_report,
    sweep_re,
)
from clapp_chaos.config.settings import RunConfig, get_published_config
from clapp_chaos.core.runner import AnalysisRunner, run_subcommand
from clapp_chaos.core.session import SparkSessionManager

__all__ = [
    "AnalysisRunner",
    "RunConfig",
    "SparkSessionManager",
    "calibrate_beta",
    "find_instability_boundary",
    "get_published_config",
    "largest_lyapunov",
    "run_subcommand",
    "simulate",
    "solve_equilibrium",
    "stability_report",
    "sweep_re",
    "__version__",
]
