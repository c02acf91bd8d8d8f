"""
Core module for shared types, errors and session management.

This module provides:
    - base: parameter sets, state vector and result containers
    - exceptions: error hierarchy with CLI exit codes
    - SparkSessionManager: Spark session for the distributed sweep backend

The subcommand orchestrator lives in clapp_chaos.core.runner; it depends on
the analysis modules and is imported from the package root.
"""

from clapp_chaos.core.base import (
    BjtParams,
    CircuitParams,
    EquilibriumPoint,
    IntegratorConfig,
    State,
    StabilityReport,
    Trajectory,
)
from clapp_chaos.core.exceptions import ClappError, InputError, NumericError
from clapp_chaos.core.session import SparkSessionManager, spark_available

__all__ = [
    "BjtParams",
    "CircuitParams",
    "State",
    "EquilibriumPoint",
    "StabilityReport",
    "IntegratorConfig",
    "Trajectory",
    "ClappError",
    "InputError",
    "NumericError",
    "SparkSessionManager",
    "spark_available",
]
