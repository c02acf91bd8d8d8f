"""Shared fixtures: the published operating point and a unit-scaled test circuit."""

import pytest

from clapp_chaos.analysis.equilibrium import solve_equilibrium
from clapp_chaos.config.settings import RunConfig, get_published_config
from clapp_chaos.core.base import BjtParams, CircuitParams


@pytest.fixture
def published_config() -> RunConfig:
    return get_published_config()


@pytest.fixture
def published_circuit(published_config) -> CircuitParams:
    return published_config.circuit


@pytest.fixture
def published_bjt(published_config) -> BjtParams:
    return published_config.bjt


@pytest.fixture
def passive_bjt() -> BjtParams:
    """Transistor switched off: the state equations become affine."""
    return BjtParams(i_s=0.0, beta=100.0, eta=0.7894)


@pytest.fixture
def unit_circuit() -> CircuitParams:
    """All reactances and bias resistors 1, R_E = 10: slow, well-scaled dynamics."""
    return CircuitParams(c1=1.0, c2=1.0, c3=1.0, l3=1.0, r1=1.0, r2=1.0, r_e=10.0, v_cc=1.0)


@pytest.fixture
def weak_bjt() -> BjtParams:
    """Barely conducting transistor for a stable nonlinear unit circuit."""
    return BjtParams(i_s=1e-15, beta=100.0, eta=1.0)


@pytest.fixture
def published_equilibrium(published_circuit, published_bjt):
    return solve_equilibrium(published_circuit, published_bjt)


@pytest.fixture
def output_config(tmp_path) -> RunConfig:
    """Published configuration writing into a temporary directory."""
    return get_published_config(output_dir=str(tmp_path / "out"))
