"""
Linear Stability Analysis.

Linearizes the state equations as

    p' = J(p_eq) p + h(p)

where J is the analytic Jacobian and h collects the exponential remainder
together with the constant drive V_CC/R1. The eigenvalues of J(p_eq) classify
the equilibrium; J(p) at arbitrary states also drives the tangent dynamics of
the Lyapunov estimator.

Example:
    >>> eq = solve_equilibrium(circuit, bjt)
    >>> report = stability_report(circuit, bjt, eq)
    >>> report.classification, report.max_real_part
"""

import logging
import math

import numpy as np
from scipy import linalg

from clapp_chaos.core.base import (
    BjtParams,
    CircuitParams,
    EquilibriumPoint,
    Stability,
    StabilityReport,
    State,
)
from clapp_chaos.core.exceptions import EigenError, InputError
from clapp_chaos.model.circuit import VectorField
from clapp_chaos.model.device import base_current, junction_exponent, transconductance

logger = logging.getLogger(__name__)

# marginal band half-width as a fraction of the spectral radius
DEFAULT_ZERO_BAND = 1e-3


def jacobian(circuit: CircuitParams, bjt: BjtParams, p: State) -> np.ndarray:
    """
    Analytic Jacobian of the state equations at p.

    Only the first column depends on p, through the transconductance at
    v_BE = v_C1.

    Args:
        circuit: Component values
        bjt: Transistor parameters
        p: State at which to linearize

    Returns:
        4x4 float array

    Raises:
        ExponentRangeError: If the junction exponent exceeds its cap
    """
    g = circuit.bias_conductance
    gm = transconductance(bjt, p.v_c1)
    c1, c2, c3, l3 = circuit.c1, circuit.c2, circuit.c3, circuit.l3
    return np.array([
        [-(g + gm / bjt.beta) / c1, -g / c1, 0.0, -1.0 / c1],
        [-(g - gm) / c2, -(g + 1.0 / circuit.r_e) / c2, 0.0, -1.0 / c2],
        [0.0, 0.0, 0.0, 1.0 / c3],
        [1.0 / l3, 1.0 / l3, -1.0 / l3, 0.0],
    ])


def tangent_vector_field(circuit: CircuitParams, bjt: BjtParams) -> VectorField:
    """
    Augmented field z' = [f(p), J(p) d] for z = [p, d].

    The state half repeats state_derivative operation for operation, so the
    two agree bit for bit. The tangent half uses the constant entries of J
    and updates only the first column with the transconductance at v_C1.
    The junction exponent is evaluated once per call.

    Raises (from the returned function):
        InputError: If a state entry is not finite
        ExponentRangeError: If the junction exponent exceeds its cap
    """
    g = circuit.bias_conductance
    c1, c2, c3, l3 = circuit.c1, circuit.c2, circuit.c3, circuit.l3
    r_e, beta, i_s = circuit.r_e, bjt.beta, bjt.i_s
    drive = circuit.v_cc / circuit.r1
    gm_scale = bjt.eta * i_s / bjt.v_t

    a11, a14 = -g / c1, -1.0 / c1
    a21, a22, a24 = -g / c2, -(g + 1.0 / r_e) / c2, -1.0 / c2

    def f(t: float, z: np.ndarray) -> np.ndarray:
        v1, v2, v3, i3, d1, d2, d3, d4 = z.tolist()
        if not math.isfinite(v1 + v2 + v3 + i3):
            raise InputError(f"non-finite state {[v1, v2, v3, i3]!r}")
        x = junction_exponent(bjt, v1)
        i_b = i_s * math.expm1(x) / beta
        gm = gm_scale * math.exp(x)
        bias = -(v1 + v2) * g + drive
        return np.array([
            (bias - i3 - i_b) / c1,
            (bias - v2 / r_e - i3 + beta * i_b) / c2,
            i3 / c3,
            (v1 + v2 - v3) / l3,
            (a11 - gm / beta / c1) * d1 + a11 * d2 + a14 * d4,
            (a21 + gm / c2) * d1 + a22 * d2 + a24 * d4,
            d4 / c3,
            (d1 + d2 - d3) / l3,
        ])

    return f


def nonlinearity(
    circuit: CircuitParams,
    bjt: BjtParams,
    p: State,
    eq: EquilibriumPoint,
) -> State:
    """
    Remainder h(p) of the linearization about eq.

    Components 3 and 4 are identically zero. Components 1 and 2 hold the
    exponential base/collector currents at p, the compensation for the
    linearized transconductance term at p_eq, and the drive V_CC/R1.

    Returns:
        h(p) such that rhs(p) = jacobian(p_eq) p + h(p)
    """
    v1 = p.v_c1
    i_b = base_current(bjt, v1)
    gm_eq = transconductance(bjt, eq.state.v_c1)
    drive = circuit.v_cc / circuit.r1
    return State(
        v_c1=(-i_b + gm_eq / bjt.beta * v1 + drive) / circuit.c1,
        v_c2=(bjt.beta * i_b - gm_eq * v1 + drive) / circuit.c2,
        v_c3=0.0,
        i_l3=0.0,
    )


def _sort_key(ev: complex) -> tuple[float, float]:
    return (-ev.real, -ev.imag)


def eigenvalues(m: np.ndarray) -> tuple[complex, ...]:
    """
    Eigenvalues of a small dense real matrix.

    Sorted by descending real part, ties broken by descending imaginary part.

    Raises:
        InputError: Matrix not square or has non-finite entries
        EigenError: LAPACK failed to converge
    """
    m = np.asarray(m, dtype=float)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise InputError(f"eigenvalues need a square matrix, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise InputError("matrix has non-finite entries")
    try:
        values = linalg.eigvals(m, check_finite=False)
    except linalg.LinAlgError as e:
        raise EigenError(f"eigenvalue computation failed: {e}") from e
    return tuple(sorted((complex(v) for v in values), key=_sort_key))


def classify(max_real_part: float, zero_band: float) -> Stability:
    """Stability class of a spectrum with the given largest real part."""
    if abs(max_real_part) <= zero_band:
        return Stability.MARGINAL
    if max_real_part > 0.0:
        return Stability.UNSTABLE
    return Stability.STABLE


def stability_report(
    circuit: CircuitParams,
    bjt: BjtParams,
    eq: EquilibriumPoint,
    zero_band: float = DEFAULT_ZERO_BAND,
) -> StabilityReport:
    """
    Jacobian, spectrum and stability class at a solved equilibrium.

    Args:
        circuit: Component values
        bjt: Transistor parameters
        eq: Solved equilibrium
        zero_band: Marginal band half-width as a fraction of the spectral radius

    Returns:
        StabilityReport
    """
    if not zero_band >= 0.0:
        raise InputError("zero_band: must be >= 0", field="zero_band")
    jac = jacobian(circuit, bjt, eq.state)
    values = eigenvalues(jac)
    max_re = values[0].real
    band = zero_band * max(abs(v) for v in values)
    report = StabilityReport(
        jacobian=jac,
        eigenvalues=values,
        max_real_part=max_re,
        classification=classify(max_re, band),
        zero_band=band,
    )
    logger.debug("stability: max Re=%.6g (%s)", max_re, report.classification.value)
    return report


def linear_solution(
    circuit: CircuitParams,
    bjt: BjtParams,
    p0: State,
    t: float,
    p_eq: State,
) -> State:
    """
    Closed-form solution of the dead-transistor (I_S = 0) system.

    With I_S = 0 the state equations are affine, p' = A (p - p_eq), so
    p(t) = p_eq + expm(A t) (p0 - p_eq).

    Args:
        circuit: Component values
        bjt: Transistor parameters; i_s must be 0
        p0: State at t = 0
        t: Elapsed time (s), may be negative
        p_eq: Equilibrium of the affine system

    Raises:
        InputError: bjt.i_s is not zero
    """
    if bjt.i_s != 0.0:
        raise InputError("linear_solution needs i_s = 0", field="i_s")
    a = jacobian(circuit, bjt, p_eq)
    offset = p0.as_array() - p_eq.as_array()
    return State.from_array(p_eq.as_array() + linalg.expm(a * t) @ offset)
