"""
Transistor Current Laws.

Large-signal exponential model of the BJT used in the oscillator:

    i_C = I_S (exp(eta v_BE / V_T) - 1)
    i_B = i_C / beta

The exponent eta v_BE / V_T is checked against BjtParams.exponent_cap before
evaluation so an overflowing junction raises ExponentRangeError instead of
returning infinity inside an integrator.

Example:
    >>> bjt = BjtParams(i_s=47.1e-12, beta=100.0, eta=0.7894)
    >>> collector_current(bjt, 0.7)
"""

import math

from clapp_chaos.core.base import BjtParams
from clapp_chaos.core.exceptions import ExponentRangeError


def junction_exponent(bjt: BjtParams, v_be: float) -> float:
    """
    Exponent eta * v_be / V_T, checked against the cap.

    Raises:
        ExponentRangeError: If the exponent exceeds bjt.exponent_cap
    """
    x = bjt.eta * v_be / bjt.v_t
    if x > bjt.exponent_cap:
        raise ExponentRangeError(x, bjt.exponent_cap)
    return x


def collector_current(bjt: BjtParams, v_be: float) -> float:
    """
    Collector current I_S (exp(eta v_be / V_T) - 1).

    Strictly increasing in v_be and bounded below by -I_S.

    Args:
        bjt: Transistor parameters
        v_be: Base-emitter voltage (V)

    Returns:
        Collector current (A)
    """
    return bjt.i_s * math.expm1(junction_exponent(bjt, v_be))


def base_current(bjt: BjtParams, v_be: float) -> float:
    """Base current collector_current / beta (A)."""
    return collector_current(bjt, v_be) / bjt.beta


def transconductance(bjt: BjtParams, v_be: float) -> float:
    """Small-signal d i_C / d v_BE = eta I_S / V_T exp(eta v_be / V_T) (S)."""
    return bjt.eta * bjt.i_s / bjt.v_t * math.exp(junction_exponent(bjt, v_be))
