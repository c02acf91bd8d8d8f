"""Tests for the log-domain exponential I-V fit."""

import pytest

from clapp_chaos.core.base import BjtParams, IvSample
from clapp_chaos.core.exceptions import DegenerateDesignError, InputError
from clapp_chaos.model.fitting import fit_exponential, generate_iv_samples


def test_recovers_generating_parameters(published_bjt):
    samples = generate_iv_samples(published_bjt, 0.5, 0.8, 50)
    fit = fit_exponential(samples, published_bjt.v_t)
    assert fit.i_s == pytest.approx(published_bjt.i_s, rel=1e-9)
    assert fit.eta == pytest.approx(0.7894, rel=1e-9)
    assert fit.rms_log_residual < 1e-9
    assert (fit.samples_used, fit.samples_rejected) == (50, 0)


def test_recovers_other_parameters():
    bjt = BjtParams(i_s=1e-14, eta=1.2, v_t=0.025)
    fit = fit_exponential(generate_iv_samples(bjt, 0.2, 0.6, 9), bjt.v_t)
    assert fit.as_tuple() == pytest.approx((1e-14, 1.2), rel=1e-9)


def test_non_positive_currents_are_dropped(published_bjt):
    samples = generate_iv_samples(published_bjt, 0.5, 0.8, 20)
    samples += [IvSample(0.1, 0.0), IvSample(0.2, -1e-9)]
    fit = fit_exponential(samples, published_bjt.v_t)
    assert fit.samples_rejected == 2
    assert fit.samples_used == 20
    assert fit.eta == pytest.approx(0.7894, rel=1e-9)


def test_single_voltage_is_degenerate():
    samples = [IvSample(0.6, 1e-3), IvSample(0.6, 2e-3)]
    with pytest.raises(DegenerateDesignError):
        fit_exponential(samples, 25.85e-3)


def test_too_few_usable_samples():
    with pytest.raises(InputError):
        fit_exponential([IvSample(0.6, 1e-3), IvSample(0.7, 0.0)], 25.85e-3)


def test_generator_needs_two_points(published_bjt):
    with pytest.raises(InputError):
        generate_iv_samples(published_bjt, 0.5, 0.8, 1)
