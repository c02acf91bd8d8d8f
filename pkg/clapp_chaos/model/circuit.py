"""
Oscillator State Equations.

State-space model of the Clapp oscillator with p = [v_C1, v_C2, v_C3, i_L3]
and v_BE = v_C1:

    dv_C1/dt = (-(v_C1 + v_C2) G - i_L3 - i_B + V_CC/R1) / C1
    dv_C2/dt = (-(v_C1 + v_C2) G - v_C2/R_E - i_L3 + beta i_B + V_CC/R1) / C2
    dv_C3/dt = i_L3 / C3
    di_L3/dt = (v_C1 + v_C2 - v_C3) / L3

with G = 1/R1 + 1/R2 and i_B the base current at v_BE = v_C1.
"""

import math
from typing import Callable, Sequence

import numpy as np

from clapp_chaos.core.base import BjtParams, CircuitParams, State, TankMode
from clapp_chaos.core.exceptions import InputError
from clapp_chaos.model.device import base_current

VectorField = Callable[[float, np.ndarray], np.ndarray]


def state_derivative(
    circuit: CircuitParams,
    bjt: BjtParams,
    y: Sequence[float],
) -> np.ndarray:
    """
    Right-hand side of the state equations on a raw array.

    Args:
        circuit: Component values
        bjt: Transistor parameters
        y: State [v_C1, v_C2, v_C3, i_L3]

    Returns:
        Time derivative as a length-4 array

    Raises:
        InputError: If any state entry is not finite
        ExponentRangeError: If the junction exponent exceeds its cap
    """
    v1, v2, v3, i3 = (float(v) for v in y)
    if not all(math.isfinite(v) for v in (v1, v2, v3, i3)):
        raise InputError(f"non-finite state {list(y)!r}")

    i_b = base_current(bjt, v1)
    bias = -(v1 + v2) * circuit.bias_conductance + circuit.v_cc / circuit.r1

    return np.array([
        (bias - i3 - i_b) / circuit.c1,
        (bias - v2 / circuit.r_e - i3 + bjt.beta * i_b) / circuit.c2,
        i3 / circuit.c3,
        (v1 + v2 - v3) / circuit.l3,
    ])


def rhs(circuit: CircuitParams, bjt: BjtParams, p: State) -> State:
    """
    Right-hand side of the state equations.

    Returns:
        State derivative [dv_C1/dt, dv_C2/dt, dv_C3/dt, di_L3/dt]
    """
    return State.from_array(state_derivative(circuit, bjt, p.as_array()))


def vector_field(circuit: CircuitParams, bjt: BjtParams) -> VectorField:
    """Autonomous f(t, y) for the integrator."""

    def f(t: float, y: np.ndarray) -> np.ndarray:
        return state_derivative(circuit, bjt, y)

    return f


def resonant_frequency(circuit: CircuitParams, mode: TankMode = TankMode.TWO_CAP) -> float:
    """
    Resonant frequency of the tank, 1 / (2 pi sqrt(L3 Cs)).

    Args:
        circuit: Component values
        mode: TWO_CAP uses Cs = C1 C2 / (C1 + C2); THREE_CAP adds C3 in series

    Returns:
        Frequency (Hz)
    """
    mode = TankMode(mode)
    if mode == TankMode.TWO_CAP:
        c_series = circuit.c1 * circuit.c2 / (circuit.c1 + circuit.c2)
    else:
        c_series = 1.0 / (1.0 / circuit.c1 + 1.0 / circuit.c2 + 1.0 / circuit.c3)
    return 1.0 / (2.0 * math.pi * math.sqrt(circuit.l3 * c_series))
