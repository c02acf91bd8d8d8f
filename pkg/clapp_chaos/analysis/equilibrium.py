"""
Equilibrium Solver.

Setting the state derivative to zero forces i_L3 = 0 and v_C3 = v_C1 + v_C2,
and reduces the rest to one scalar equation in the base current:

    v_C2(i_B) = (1 + beta) R_E i_B
    v_C3(i_B) = R2 (V_CC - R1 i_B) / (R1 + R2)
    v_C1(i_B) = v_C3(i_B) - v_C2(i_B)
    g(i_B)    = i_B - base_current(v_C1(i_B)) = 0

v_C1 is strictly decreasing in i_B and the base current strictly increasing in
v_C1, so g is strictly increasing and the root on [0, i_B0] is unique, where
i_B0 makes v_C1 vanish.

Example:
    >>> eq = solve_equilibrium(circuit, bjt)
    >>> eq.state.v_c3, eq.i_b_eq
"""

import logging
import math
import sys

from clapp_chaos.core.base import BjtParams, CircuitParams, EquilibriumPoint, State
from clapp_chaos.core.exceptions import ExponentRangeError, InputError
from clapp_chaos.model.circuit import state_derivative
from clapp_chaos.model.device import base_current, transconductance
from clapp_chaos.solvers.roots import DEFAULT_MAX_ITER, bisection, newton_bisection

logger = logging.getLogger(__name__)

DEFAULT_TOL = 1e-12

# equilibrium root-finding paths
METHODS = ("newton", "bisect")


def _v_c2(circuit: CircuitParams, bjt: BjtParams, i_b: float) -> float:
    return (1.0 + bjt.beta) * circuit.r_e * i_b


def _v_c3(circuit: CircuitParams, i_b: float) -> float:
    return circuit.r2 * (circuit.v_cc - circuit.r1 * i_b) / (circuit.r1 + circuit.r2)


def _v_c1(circuit: CircuitParams, bjt: BjtParams, i_b: float) -> float:
    return _v_c3(circuit, i_b) - _v_c2(circuit, bjt, i_b)


def _v_c1_slope(circuit: CircuitParams, bjt: BjtParams) -> float:
    """-d v_C1 / d i_B, a positive resistance."""
    return circuit.r1 * circuit.r2 / (circuit.r1 + circuit.r2) + (1.0 + bjt.beta) * circuit.r_e


def zero_drive_base_current(circuit: CircuitParams, bjt: BjtParams) -> float:
    """
    Base current i_B0 at which v_C1 = 0.

    Returns:
        (V_CC / R1) / (1 + (1 + beta) R_E G), signed like V_CC
    """
    g = circuit.bias_conductance
    return (circuit.v_cc / circuit.r1) / (1.0 + (1.0 + bjt.beta) * circuit.r_e * g)


def residual_scales(circuit: CircuitParams, bjt: BjtParams) -> tuple[float, float, float, float]:
    """
    Characteristic magnitude of each rhs component.

    {V_CC/(R1 C1), V_CC/(R1 C2), i_B0/C3, V_CC/L3}, with 1.0 standing in for
    any scale that is zero.
    """
    i_b0 = zero_drive_base_current(circuit, bjt)
    scales = (
        abs(circuit.v_cc) / (circuit.r1 * circuit.c1),
        abs(circuit.v_cc) / (circuit.r1 * circuit.c2),
        abs(i_b0) / circuit.c3,
        abs(circuit.v_cc) / circuit.l3,
    )
    return tuple(s if s > 0.0 else 1.0 for s in scales)


def _bracket(circuit: CircuitParams, bjt: BjtParams) -> tuple[float, float]:
    """Search interval for i_B, clipped where the junction exponent would overflow."""
    i_b0 = zero_drive_base_current(circuit, bjt)
    lo, hi = sorted((0.0, i_b0))

    v_cap = bjt.exponent_cap * bjt.v_t / bjt.eta
    v_lo = _v_c1(circuit, bjt, lo)
    if v_lo > v_cap:
        # v_C1 falls linearly in i_B; start where the exponent reaches the cap
        i_cap = (v_lo - v_cap) / _v_c1_slope(circuit, bjt)
        lo = lo + i_cap * (1.0 + 1e-12)
        if lo >= hi:
            raise ExponentRangeError(bjt.eta * v_lo / bjt.v_t, bjt.exponent_cap)
        if lo - base_current(bjt, _v_c1(circuit, bjt, lo)) > 0.0:
            # root sits where the exponent is out of range
            raise ExponentRangeError(bjt.eta * v_lo / bjt.v_t, bjt.exponent_cap)
    return lo, hi


def solve_equilibrium(
    circuit: CircuitParams,
    bjt: BjtParams,
    tol: float = DEFAULT_TOL,
    max_iter: int = DEFAULT_MAX_ITER,
    method: str = "newton",
) -> EquilibriumPoint:
    """
    Solve for the unique equilibrium point.

    Args:
        circuit: Component values
        bjt: Transistor parameters
        tol: Relative tolerance on i_B
        max_iter: Iteration cap of the root finder
        method: "newton" (safeguarded Newton with bisection fallback) or
            "bisect" (plain bisection)

    Returns:
        EquilibriumPoint with state, i_B, and residual diagnostics

    Raises:
        InputError: tol not positive or unknown method
        BracketError: no sign change on the bracket
        ConvergenceError: iteration cap exceeded
    """
    if not tol > 0.0:
        raise InputError("tol: must be > 0", field="tol")
    if method not in METHODS:
        raise InputError(f"method: unknown equilibrium method {method!r}", field="method")

    lo, hi = _bracket(circuit, bjt)
    slope = _v_c1_slope(circuit, bjt)

    def g(i_b: float) -> float:
        return i_b - base_current(bjt, _v_c1(circuit, bjt, i_b))

    def g_and_derivative(i_b: float) -> tuple[float, float]:
        v1 = _v_c1(circuit, bjt, i_b)
        return (
            i_b - base_current(bjt, v1),
            1.0 + transconductance(bjt, v1) / bjt.beta * slope,
        )

    if method == "newton":
        result = newton_bisection(g_and_derivative, lo, hi, rel_tol=tol, max_iter=max_iter)
    else:
        rel_tol = max(tol, 4.0 * sys.float_info.epsilon)
        result = bisection(g, lo, hi, rel_tol=rel_tol, max_iter=max_iter)

    i_b = result.root
    v2 = _v_c2(circuit, bjt, i_b)
    v3 = _v_c3(circuit, i_b)
    state = State(v_c1=v3 - v2, v_c2=v2, v_c3=v3, i_l3=0.0)

    residual = tuple(float(r) for r in state_derivative(circuit, bjt, state.as_array()))
    scales = residual_scales(circuit, bjt)
    scaled = max(abs(r) / s for r, s in zip(residual, scales))

    logger.debug(
        "equilibrium (%s, %d iterations): i_B=%.17g v_C1=%.17g scaled residual=%.3g",
        method,
        result.iterations,
        i_b,
        state.v_c1,
        scaled,
    )
    return EquilibriumPoint(
        state=state,
        i_b_eq=i_b,
        residual=residual,
        scaled_residual=scaled,
        iterations=result.iterations,
        method=method,
    )


def equilibrium_residual(
    circuit: CircuitParams,
    bjt: BjtParams,
    eq: EquilibriumPoint,
) -> tuple[float, float, float, float]:
    """rhs evaluated at eq.state, per component."""
    return tuple(float(r) for r in state_derivative(circuit, bjt, eq.state.as_array()))


def is_converged(eq: EquilibriumPoint, tol: float) -> bool:
    """Whether the scaled residual of eq is within tol."""
    return math.isfinite(eq.scaled_residual) and eq.scaled_residual <= tol
