"""Numerical building blocks: bracketed root finders and Runge-Kutta integrators."""

from clapp_chaos.solvers.roots import RootResult, bisection, newton_bisection
from clapp_chaos.solvers.rungekutta import (
    MIN_STEP,
    DormandPrince54,
    ExplicitRungeKutta,
    RungeKuttaSolution,
)

__all__ = [
    "RootResult",
    "bisection",
    "newton_bisection",
    "MIN_STEP",
    "DormandPrince54",
    "ExplicitRungeKutta",
    "RungeKuttaSolution",
]
