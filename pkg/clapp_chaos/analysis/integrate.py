"""
Time Integration and Trajectory Diagnostics.

Integrates the nonlinear state equations with the Dormand-Prince 5(4) pair
and provides the checks used to judge a run qualitatively:
    - phase_projection: (x, y) pairs of two state components
    - autocorrelation / dominant_period_strength: periodicity of a series
    - nearest_revisit_distance: closest return of a projected orbit

Example:
    >>> eq = solve_equilibrium(circuit, bjt)
    >>> traj = simulate(circuit, bjt, perturbed_equilibrium(eq), IntegratorConfig(t_end=10e-9))
    >>> pairs = phase_projection(traj, "v_c1", "v_c2")
"""

import logging
from typing import Sequence

import numpy as np
from scipy import signal, spatial

from clapp_chaos.core.base import (
    BjtParams,
    CircuitParams,
    EquilibriumPoint,
    IntegratorConfig,
    State,
    StateComponent,
    Trajectory,
)
from clapp_chaos.core.exceptions import InputError, IntegrationError
from clapp_chaos.model.circuit import vector_field
from clapp_chaos.solvers.rungekutta import DormandPrince54

logger = logging.getLogger(__name__)

DEFAULT_PERTURBATION = 1e-3


def perturbed_equilibrium(
    eq: EquilibriumPoint,
    perturbation: float = DEFAULT_PERTURBATION,
) -> State:
    """Default initial condition p_eq + [perturbation, 0, 0, 0]."""
    return eq.state + State(perturbation, 0.0, 0.0, 0.0)


def simulate(
    circuit: CircuitParams,
    bjt: BjtParams,
    p0: State,
    cfg: IntegratorConfig,
) -> Trajectory:
    """
    Integrate the state equations from p0 over [cfg.t_start, cfg.t_end].

    Samples are emitted at t_start + k * sample_interval and at t_end.

    Args:
        circuit: Component values
        bjt: Transistor parameters
        p0: Initial state
        cfg: Tolerances, horizon and sampling

    Returns:
        Trajectory with step statistics

    Raises:
        IntegrationError: Non-finite state or junction overflow mid-run; the
            partial attribute holds the Trajectory up to the failure
        StiffnessError: Step size underflow; partial as above
    """
    solver = DormandPrince54(
        vector_field(circuit, bjt),
        rel_tol=cfg.rel_tol,
        abs_tol=cfg.abs_tol,
        max_step=cfg.max_step,
    )
    try:
        solution = solver.integrate(
            cfg.t_start,
            p0.as_array(),
            cfg.t_end,
            sample_times=cfg.sample_times(),
            initial_step=cfg.initial_step,
            fixed_step=cfg.fixed_step,
        )
    except IntegrationError as e:
        times, states = e.partial
        logger.warning("integration stopped at t=%.6g s after %d samples", e.time, len(times))
        raise type(e)(str(e), e.time, Trajectory(times=times, states=states)) from e

    stats = solution.stats
    logger.info(
        "integrated %d steps (%d rejected), h in [%.3g, %.3g] s",
        stats.accepted,
        stats.rejected,
        stats.min_step,
        stats.max_step,
    )
    return Trajectory(times=solution.times, states=solution.states, stats=stats)


def phase_projection(
    traj: Trajectory,
    x: "str | StateComponent",
    y: "str | StateComponent",
) -> list[tuple[float, float]]:
    """
    Pairs (x(t_k), y(t_k)) in trajectory order.

    Raises:
        InputError: Unknown component or x == y
    """
    cx, cy = StateComponent.parse(x), StateComponent.parse(y)
    if cx == cy:
        raise InputError(f"phase projection needs two distinct components, got {cx.value} twice")
    return list(zip(traj.component(cx).tolist(), traj.component(cy).tolist()))


def autocorrelation(values: Sequence[float]) -> np.ndarray:
    """
    Normalized autocorrelation at non-negative lags.

    Mean removed, biased estimator, value 1 at lag 0.

    Raises:
        InputError: Fewer than 2 samples or a constant series
    """
    x = np.asarray(values, dtype=float)
    if x.size < 2:
        raise InputError("autocorrelation needs at least 2 samples")
    x = x - x.mean()
    full = signal.correlate(x, x, mode="full", method="fft")
    acf = full[x.size - 1:]
    if acf[0] <= 0.0:
        raise InputError("autocorrelation of a constant series is undefined")
    return acf / acf[0]


def dominant_period_strength(values: Sequence[float]) -> float:
    """
    Height of the largest autocorrelation peak away from lag 0.

    Close to 1 for a periodic series, small for an aperiodic one. Returns 0.0
    when the autocorrelation has no interior peak.
    """
    acf = autocorrelation(values)
    peaks, _ = signal.find_peaks(acf)
    if peaks.size == 0:
        return 0.0
    return float(acf[peaks].max())


def nearest_revisit_distance(
    pairs: Sequence[tuple[float, float]],
    min_separation: int = 10,
) -> float:
    """
    Smallest distance between two samples at least min_separation apart.

    Points closer in index than min_separation are neighbours along the same
    pass of the curve and are not counted as revisits.

    Args:
        pairs: Projected points, in trajectory order
        min_separation: Minimum index distance of a revisit (>= 1)

    Returns:
        Minimum revisit distance, inf when no pair is far enough apart
    """
    if min_separation < 1:
        raise InputError("min_separation: must be >= 1", field="min_separation")
    points = np.asarray(pairs, dtype=float).reshape(-1, 2)
    n = len(points)
    if n <= min_separation:
        return float("inf")

    # at most 2 * min_separation - 1 points (self included) sit within the
    # excluded index window, so this many neighbours always reach one outside
    k = min(n, 2 * min_separation)
    tree = spatial.cKDTree(points)
    dist, idx = tree.query(points, k=k)
    far = np.abs(idx - np.arange(n)[:, None]) >= min_separation
    masked = np.where(far, dist, np.inf)
    return float(masked.min())
