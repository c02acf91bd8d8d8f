"""Tests for trajectory simulation and trajectory diagnostics."""

import math

import numpy as np
import pytest

from clapp_chaos.analysis.equilibrium import solve_equilibrium
from clapp_chaos.analysis.integrate import (
    autocorrelation,
    dominant_period_strength,
    nearest_revisit_distance,
    perturbed_equilibrium,
    phase_projection,
    simulate,
)
from clapp_chaos.analysis.stability import linear_solution
from clapp_chaos.core.base import IntegratorConfig, State
from clapp_chaos.core.exceptions import InputError, IntegrationError


@pytest.fixture
def unit_integrator():
    return IntegratorConfig(
        rel_tol=1e-10,
        abs_tol=(1e-12, 1e-12, 1e-12, 1e-12),
        t_end=50.0,
        sample_interval=0.5,
    )


def test_matches_closed_form_for_passive_circuit(unit_circuit, passive_bjt, unit_integrator):
    eq = solve_equilibrium(unit_circuit, passive_bjt)
    p0 = State(0.2, -0.1, 0.3, 0.05)
    traj = simulate(unit_circuit, passive_bjt, p0, unit_integrator)
    for index in (10, 50, len(traj) - 1):
        exact = linear_solution(unit_circuit, passive_bjt, p0, traj.times[index], eq.state)
        np.testing.assert_allclose(traj.states[index], exact.as_array(), atol=1e-6)


def test_samples_on_the_output_grid(unit_circuit, passive_bjt, unit_integrator):
    traj = simulate(unit_circuit, passive_bjt, State(0.0, 0.0, 0.0, 0.0), unit_integrator)
    assert len(traj) == 101
    assert traj.times[0] == 0.0
    assert traj.times[-1] == 50.0
    np.testing.assert_allclose(np.diff(traj.times), 0.5)
    np.testing.assert_array_equal(traj.states[0], np.zeros(4))
    assert traj.stats.accepted > 0


def test_linear_solution_at_zero_time(unit_circuit, passive_bjt):
    p0 = State(0.2, -0.1, 0.3, 0.05)
    p_eq = solve_equilibrium(unit_circuit, passive_bjt).state
    assert linear_solution(unit_circuit, passive_bjt, p0, 0.0, p_eq).as_array() == pytest.approx(
        p0.as_array()
    )


def test_linear_solution_needs_dead_transistor(unit_circuit, weak_bjt):
    p = State(0.0, 0.0, 0.0, 0.0)
    with pytest.raises(InputError):
        linear_solution(unit_circuit, weak_bjt, p, 1.0, p)


def test_stable_circuit_returns_to_equilibrium(unit_circuit, weak_bjt):
    eq = solve_equilibrium(unit_circuit, weak_bjt)
    cfg = IntegratorConfig(abs_tol=(1e-12,) * 4, t_end=400.0, sample_interval=1.0)
    traj = simulate(unit_circuit, weak_bjt, perturbed_equilibrium(eq), cfg)
    np.testing.assert_allclose(traj.states[-1], eq.state.as_array(), atol=1e-7)


def test_perturbed_equilibrium_offsets_v_c1(published_equilibrium):
    p0 = perturbed_equilibrium(published_equilibrium, 1e-3)
    assert p0.v_c1 == pytest.approx(published_equilibrium.state.v_c1 + 1e-3)
    assert (p0.v_c2, p0.v_c3, p0.i_l3) == (
        published_equilibrium.state.v_c2,
        published_equilibrium.state.v_c3,
        0.0,
    )


@pytest.mark.slow
def test_chaotic_trajectory_stays_bounded(published_circuit, published_bjt, published_equilibrium):
    cfg = IntegratorConfig(t_end=2e-9, sample_interval=1e-12)
    traj = simulate(published_circuit, published_bjt, perturbed_equilibrium(published_equilibrium), cfg)
    assert len(traj) == 2001
    assert np.all(np.isfinite(traj.states))
    assert np.all(np.abs(traj.states[:, :3]) < 10 * published_circuit.v_cc)
    # the unstable equilibrium is left
    assert np.ptp(traj.component("v_c1")[-500:]) > 1e-3


def test_failure_carries_partial_trajectory(published_circuit, published_bjt):
    # a junction forward-biased past the exponent cap
    p0 = State(30.0, 0.0, 0.0, 0.0)
    cfg = IntegratorConfig(t_end=1e-9, sample_interval=1e-12, fixed_step=1e-12)
    with pytest.raises(IntegrationError) as info:
        simulate(published_circuit, published_bjt, p0, cfg)
    partial = info.value.partial
    assert len(partial) == 1
    assert partial.times[0] == 0.0


class TestPhaseProjection:
    def test_pairs_follow_components(self, unit_circuit, passive_bjt, unit_integrator):
        traj = simulate(unit_circuit, passive_bjt, State(0.2, -0.1, 0.3, 0.05), unit_integrator)
        pairs = phase_projection(traj, "v_c1", "i_l3")
        assert len(pairs) == len(traj)
        assert pairs[5] == (traj.states[5, 0], traj.states[5, 3])

    def test_same_component_twice(self, unit_circuit, passive_bjt, unit_integrator):
        traj = simulate(unit_circuit, passive_bjt, State(0.2, -0.1, 0.3, 0.05), unit_integrator)
        with pytest.raises(InputError):
            phase_projection(traj, "v_c2", "v_c2")

    def test_unknown_component(self, unit_circuit, passive_bjt, unit_integrator):
        traj = simulate(unit_circuit, passive_bjt, State(0.2, -0.1, 0.3, 0.05), unit_integrator)
        with pytest.raises(InputError):
            phase_projection(traj, "v_c9", "v_c2")


class TestDiagnostics:
    def test_autocorrelation_normalized(self):
        acf = autocorrelation(np.sin(np.linspace(0.0, 20 * math.pi, 1000)))
        assert acf[0] == pytest.approx(1.0)
        assert np.all(np.abs(acf) <= 1.0 + 1e-12)

    def test_constant_series_rejected(self):
        with pytest.raises(InputError):
            autocorrelation(np.ones(10))

    def test_periodic_series_has_strong_peak(self):
        t = np.linspace(0.0, 40 * math.pi, 4000)
        assert dominant_period_strength(np.sin(t)) > 0.8

    def test_noise_has_weak_peak(self):
        rng = np.random.default_rng(7)
        assert dominant_period_strength(rng.standard_normal(4000)) < 0.2

    def test_closed_orbit_revisits_itself(self):
        t = np.linspace(0.0, 4 * math.pi, 400, endpoint=False)
        pairs = list(zip(np.cos(t), np.sin(t)))
        assert nearest_revisit_distance(pairs) == pytest.approx(0.0, abs=1e-12)

    def test_open_spiral_never_revisits(self):
        t = np.linspace(0.0, 6 * math.pi, 600)
        pairs = list(zip(np.exp(0.1 * t) * np.cos(t), np.exp(0.1 * t) * np.sin(t)))
        assert nearest_revisit_distance(pairs) > 0.05

    def test_short_series(self):
        assert nearest_revisit_distance([(0.0, 0.0)] * 5, min_separation=10) == math.inf
