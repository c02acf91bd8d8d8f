"""
Model Module.

Device and circuit laws of the Clapp oscillator:
    - device: exponential BJT current laws with an exponent cap
    - circuit: state-space right-hand side and tank resonance
    - fitting: log-domain exponential fit of I-V characteristics
"""

from clapp_chaos.model.circuit import resonant_frequency, rhs, state_derivative, vector_field
from clapp_chaos.model.device import base_current, collector_current, transconductance
from clapp_chaos.model.fitting import ExponentialFit, fit_exponential, generate_iv_samples

__all__ = [
    "collector_current",
    "base_current",
    "transconductance",
    "rhs",
    "state_derivative",
    "vector_field",
    "resonant_frequency",
    "ExponentialFit",
    "fit_exponential",
    "generate_iv_samples",
]
