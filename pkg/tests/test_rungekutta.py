"""Tests for the Dormand-Prince integrator."""

import math

import numpy as np
import pytest
from scipy import linalg

from clapp_chaos.analysis.equilibrium import solve_equilibrium
from clapp_chaos.analysis.stability import jacobian, linear_solution
from clapp_chaos.core.base import State
from clapp_chaos.core.exceptions import ExponentRangeError, IntegrationError, StiffnessError
from clapp_chaos.model.circuit import vector_field
from clapp_chaos.solvers.rungekutta import DormandPrince54


def decay(t, y):
    return -y


def test_exponential_decay_end_point():
    solver = DormandPrince54(decay, rel_tol=1e-10, abs_tol=[1e-12])
    solution = solver.integrate(0.0, [1.0], 2.0)
    assert solution.y_end[0] == pytest.approx(math.exp(-2.0), rel=1e-8)
    assert solution.times.tolist() == [2.0]
    assert solution.stats.accepted > 0
    assert solution.last_step > 0.0


def test_dense_samples_follow_solution():
    solver = DormandPrince54(decay, rel_tol=1e-10, abs_tol=[1e-12])
    samples = np.linspace(0.0, 3.0, 31)
    solution = solver.integrate(0.0, [1.0], 3.0, sample_times=samples)
    np.testing.assert_array_equal(solution.times, samples)
    np.testing.assert_allclose(solution.states[:, 0], np.exp(-samples), atol=1e-6)


def test_fixed_step_takes_exact_steps():
    solver = DormandPrince54(decay, rel_tol=1e-6, abs_tol=[1e-6])
    solution = solver.integrate(0.0, [1.0], 1.0, fixed_step=0.1)
    assert solution.stats.accepted == 10
    assert solution.stats.rejected == 0
    assert solution.y_end[0] == pytest.approx(math.exp(-1.0), rel=1e-7)


def test_fifth_order_convergence(published_circuit, passive_bjt):
    # transistor off: the system is linear and expm gives the exact solution
    eq = solve_equilibrium(published_circuit, passive_bjt)
    p0 = eq.state + State(1e-3, 0.0, 0.0, 0.0)
    t_end = 100e-12
    a = jacobian(published_circuit, passive_bjt, eq.state)
    exact = eq.state.as_array() + linalg.expm(a * t_end) @ (p0.as_array() - eq.state.as_array())

    solver = DormandPrince54(
        vector_field(published_circuit, passive_bjt), rel_tol=1e-9, abs_tol=[1e-9] * 4
    )
    errors = []
    for h in (2e-12, 1e-12):
        y = solver.integrate(0.0, p0.as_array(), t_end, fixed_step=h).y_end
        errors.append(np.max(np.abs(y[:3] - exact[:3])))
    assert errors[1] > 0.0
    assert errors[0] / errors[1] >= 16.0


def test_step_underflow_raises_stiffness_error():
    solver = DormandPrince54(lambda t, y: -1000.0 * y, rel_tol=1e-9, abs_tol=[1e-9], min_step=1e-3)
    with pytest.raises(StiffnessError) as info:
        solver.integrate(0.0, [1.0], 10.0, initial_step=1.0)
    times, states = info.value.partial
    assert len(times) == len(states)


def overflowing(t, y):
    if y[0] > 2.0:
        raise ExponentRangeError(float(y[0]) * 400.0, 700.0)
    return y


def test_fixed_step_failure_keeps_partial_output():
    solver = DormandPrince54(overflowing, rel_tol=1e-9, abs_tol=[1e-9])
    samples = np.linspace(0.0, 5.0, 501)
    with pytest.raises(IntegrationError) as info:
        solver.integrate(0.0, [1.0], 5.0, sample_times=samples, fixed_step=0.01)
    times, states = info.value.partial
    assert info.value.time == pytest.approx(math.log(2.0), abs=0.02)
    assert len(times) > 0
    assert times[-1] <= info.value.time
    assert np.all(states[:, 0] <= 2.0)


def test_adaptive_failure_raises_integration_error():
    solver = DormandPrince54(overflowing, rel_tol=1e-9, abs_tol=[1e-9], min_step=1e-6)
    with pytest.raises(IntegrationError):
        solver.integrate(0.0, [1.0], 5.0)


def test_error_shrinks_with_tolerance(unit_circuit, passive_bjt):
    eq = solve_equilibrium(unit_circuit, passive_bjt)
    p0 = State(0.2, -0.1, 0.3, 0.05)
    exact = linear_solution(unit_circuit, passive_bjt, p0, 20.0, eq.state).as_array()
    errors = []
    for rel_tol in (1e-4, 1e-6, 1e-8):
        solver = DormandPrince54(
            vector_field(unit_circuit, passive_bjt), rel_tol=rel_tol, abs_tol=[rel_tol * 1e-3] * 4
        )
        y = solver.integrate(0.0, p0.as_array(), 20.0).y_end
        errors.append(np.max(np.abs(y - exact)))
    assert errors[0] > errors[1] > errors[2]


def test_forward_then_backward_returns_to_start(unit_circuit, weak_bjt):
    field = vector_field(unit_circuit, weak_bjt)
    offset = np.array([0.05, -0.02, 0.1, 0.01])
    p0 = solve_equilibrium(unit_circuit, weak_bjt).state.as_array() + offset
    rel_tol = 1e-10
    forward = DormandPrince54(field, rel_tol=rel_tol, abs_tol=[1e-12] * 4)
    backward = DormandPrince54(lambda t, y: -field(t, y), rel_tol=rel_tol, abs_tol=[1e-12] * 4)
    y_end = forward.integrate(0.0, p0, 0.5).y_end
    y_back = backward.integrate(0.0, y_end, 0.5).y_end
    np.testing.assert_allclose(y_back, p0, rtol=0.0, atol=100 * rel_tol * np.abs(p0).max())
