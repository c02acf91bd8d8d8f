"""Tests for the equilibrium solver."""

import dataclasses

import numpy as np
import pytest

from clapp_chaos.analysis.equilibrium import (
    equilibrium_residual,
    is_converged,
    solve_equilibrium,
    zero_drive_base_current,
)
from clapp_chaos.core.base import BjtParams
from clapp_chaos.core.exceptions import ConvergenceError, InputError


def test_published_operating_point(published_circuit, published_bjt):
    eq = solve_equilibrium(published_circuit, published_bjt)
    assert eq.i_b_eq == pytest.approx(1.192e-4, rel=0.01)
    assert eq.state.v_c1 == pytest.approx(0.632, abs=0.01)
    assert eq.state.i_l3 == 0.0
    assert eq.state.v_c3 == pytest.approx(eq.state.v_c1 + eq.state.v_c2, rel=1e-12)
    assert eq.state.v_c2 == pytest.approx((1 + published_bjt.beta) * published_circuit.r_e * eq.i_b_eq)
    assert is_converged(eq, 1e-8)


def test_residual_matches_report(published_circuit, published_bjt, published_equilibrium):
    assert equilibrium_residual(published_circuit, published_bjt, published_equilibrium) == pytest.approx(
        published_equilibrium.residual
    )


def test_newton_and_bisection_agree(published_circuit, published_bjt):
    newton = solve_equilibrium(published_circuit, published_bjt, method="newton")
    bisect = solve_equilibrium(published_circuit, published_bjt, method="bisect")
    assert newton.i_b_eq == pytest.approx(bisect.i_b_eq, rel=1e-9)
    assert bisect.method == "bisect"
    assert newton.iterations < bisect.iterations


def test_passive_equilibrium_is_exact(published_circuit, passive_bjt):
    eq = solve_equilibrium(published_circuit, passive_bjt)
    assert eq.i_b_eq == 0.0
    assert eq.state.v_c3 == 7.0
    assert eq.state.v_c1 == 7.0
    assert eq.state.v_c2 == 0.0
    assert eq.scaled_residual < 1e-12


@pytest.mark.parametrize("beta", [50.0, 100.0, 200.0, 300.0])
def test_base_current_between_zero_and_drive_limit(published_circuit, published_bjt, beta):
    bjt = published_bjt.with_beta(beta)
    eq = solve_equilibrium(published_circuit, bjt)
    assert 0.0 < eq.i_b_eq < zero_drive_base_current(published_circuit, bjt)
    assert eq.scaled_residual < 1e-8


def test_strongly_conducting_junction(published_circuit):
    # huge saturation current pins v_C1 near zero
    eq = solve_equilibrium(published_circuit, BjtParams(i_s=1e-3, beta=100.0, eta=1.0))
    assert 0.0 < eq.state.v_c1 < 0.1


@pytest.mark.parametrize("kwargs", [{"tol": 0.0}, {"method": "secant"}])
def test_invalid_arguments(published_circuit, published_bjt, kwargs):
    with pytest.raises(InputError):
        solve_equilibrium(published_circuit, published_bjt, **kwargs)


def test_iteration_cap(published_circuit, published_bjt):
    with pytest.raises(ConvergenceError):
        solve_equilibrium(published_circuit, published_bjt, method="bisect", max_iter=5)


def _random_operating_points(circuit, count, seed):
    rng = np.random.default_rng(seed)
    for _ in range(count):
        bjt = BjtParams(
            i_s=10.0 ** rng.uniform(-15.0, -9.0),
            beta=rng.uniform(20.0, 500.0),
            eta=rng.uniform(0.6, 1.2),
        )
        varied = dataclasses.replace(
            circuit,
            r1=rng.uniform(1e3, 2e4),
            r2=rng.uniform(1e3, 2e4),
            r_e=10.0 ** rng.uniform(0.0, 3.0),
            v_cc=rng.uniform(3.0, 15.0),
        )
        yield varied, bjt


def test_newton_and_bisection_agree_across_parameters(published_circuit):
    for circuit, bjt in _random_operating_points(published_circuit, 100, seed=2024):
        newton = solve_equilibrium(circuit, bjt, tol=1e-13, max_iter=500)
        bisect = solve_equilibrium(circuit, bjt, tol=1e-14, max_iter=500, method="bisect")
        assert newton.i_b_eq == pytest.approx(bisect.i_b_eq, rel=1e-12)
        assert newton.state.v_c3 == pytest.approx(
            newton.state.v_c1 + newton.state.v_c2, rel=1e-12
        )


def test_base_current_rises_with_supply(published_circuit, published_bjt):
    currents = [
        solve_equilibrium(dataclasses.replace(published_circuit, v_cc=v), published_bjt).i_b_eq
        for v in np.linspace(0.5, 20.0, 40)
    ]
    assert all(b > a for a, b in zip(currents, currents[1:]))
