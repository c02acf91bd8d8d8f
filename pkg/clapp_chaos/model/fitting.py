"""
Exponential I-V Fitting.

Fits i_dc ~ I_S exp(eta v_be / V_T) by unweighted least squares on
ln(i_dc) = ln(I_S) + (eta / V_T) v_be. The "-1" of the full junction law is
neglected, which is accurate in forward bias where v_be >> V_T.

Example:
    >>> samples = IvCsvParser().parse_file("bfu730f_iv.csv")
    >>> fit = fit_exponential(samples, v_t=25.85e-3)
    >>> print(fit.i_s, fit.eta)
"""

import logging
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from clapp_chaos.core.base import BjtParams, IvSample
from clapp_chaos.core.exceptions import DegenerateDesignError, InputError

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ExponentialFit:
    """
    Fitted exponential junction parameters.

    Attributes:
        i_s: Saturation current (A)
        eta: Slope factor
        rms_log_residual: RMS of ln(i_dc) residuals
        samples_used: Samples with i_dc > 0 entering the fit
        samples_rejected: Samples dropped because i_dc <= 0
    """
    i_s: float
    eta: float
    rms_log_residual: float
    samples_used: int
    samples_rejected: int

    def as_tuple(self) -> tuple[float, float]:
        return self.i_s, self.eta


def fit_exponential(samples: Sequence[IvSample], v_t: float) -> ExponentialFit:
    """
    Fit (I_S, eta) to I-V samples in the log domain.

    Args:
        samples: Measured or simulated (v_be, i_dc) pairs
        v_t: Thermal voltage (V)

    Returns:
        ExponentialFit

    Raises:
        InputError: Fewer than 2 samples with i_dc > 0, or v_t <= 0
        DegenerateDesignError: All usable samples share one v_be
    """
    if not v_t > 0.0:
        raise InputError("v_t: must be > 0", field="v_t")

    usable = [
        s for s in samples
        if s.i_dc > 0.0 and math.isfinite(s.v_be) and math.isfinite(s.i_dc)
    ]
    rejected = len(samples) - len(usable)
    if rejected:
        logger.warning("Dropped %d I-V samples with non-positive or non-finite values", rejected)
    if len(usable) < 2:
        raise InputError(f"need at least 2 samples with i_dc > 0, got {len(usable)}")

    v = np.array([s.v_be for s in usable])
    log_i = np.log([s.i_dc for s in usable])
    if np.ptp(v) == 0.0:
        raise DegenerateDesignError("all samples share the same v_be")

    # centering keeps the 2x2 normal system well conditioned
    v_mean = v.mean()
    design = np.column_stack([np.ones_like(v), v - v_mean])
    (intercept, slope), *_ = np.linalg.lstsq(design, log_i, rcond=None)

    residual = log_i - (intercept + slope * (v - v_mean))
    fit = ExponentialFit(
        i_s=float(math.exp(intercept - slope * v_mean)),
        eta=float(slope * v_t),
        rms_log_residual=float(np.sqrt(np.mean(residual**2))),
        samples_used=len(usable),
        samples_rejected=rejected,
    )
    logger.debug(
        "Exponential fit: i_s=%.6g eta=%.6g rms=%.3g", fit.i_s, fit.eta, fit.rms_log_residual
    )
    return fit


def generate_iv_samples(
    bjt: BjtParams,
    v_lo: float,
    v_hi: float,
    count: int,
) -> list[IvSample]:
    """
    Noiseless samples from the fitted form i_dc = I_S exp(eta v / V_T).

    Args:
        bjt: Generator parameters
        v_lo: First v_be (V)
        v_hi: Last v_be (V)
        count: Number of samples (>= 2)

    Returns:
        Samples on an evenly spaced v_be grid
    """
    if count < 2:
        raise InputError("iv_count: must be >= 2", field="iv_count")
    return [
        IvSample(v_be=float(v), i_dc=bjt.i_s * math.exp(bjt.eta * v / bjt.v_t))
        for v in np.linspace(v_lo, v_hi, count)
    ]
