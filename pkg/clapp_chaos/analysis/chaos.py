"""
Chaos Analysis.

Edge-of-chaos analysis over the emitter resistance and trajectory-based
chaos detection:
    - sweep_re: largest eigenvalue real part at the moving equilibrium for a
      grid of R_E values (serial or on a Spark session)
    - find_instability_boundary: bisection on the sign of that real part
    - largest_lyapunov: tangent-space (Benettin) estimate of lambda_1
    - calibrate_beta: current gain whose spectrum best matches reference
      eigenvalue real parts

Example:
    >>> grid = make_grid(1.0, 500.0, 50, GridSpacing.LOG)
    >>> sweep = sweep_re(circuit, bjt, grid)
    >>> boundary = find_instability_boundary(circuit, bjt, 1.0, 500.0, tol=1e-3)
"""

import logging
import math
from typing import Any, Optional, Sequence

import numpy as np

from clapp_chaos.analysis.equilibrium import DEFAULT_TOL, solve_equilibrium
from clapp_chaos.analysis.stability import (
    DEFAULT_ZERO_BAND,
    stability_report,
    tangent_vector_field,
)
from clapp_chaos.core.base import (
    BjtParams,
    BoundaryResult,
    CalibrationResult,
    CircuitParams,
    GridSpacing,
    IntegratorConfig,
    LyapunovEstimate,
    State,
    SweepBackend,
    SweepPoint,
    SweepResult,
)
from clapp_chaos.core.exceptions import (
    BracketError,
    ClappError,
    ConvergenceError,
    InputError,
    IntegrationError,
)
from clapp_chaos.core.session import SparkSessionManager, ordered_map
from clapp_chaos.solvers.rungekutta import DormandPrince54

logger = logging.getLogger(__name__)

# published eigenvalue real parts at the operating point (1/s)
REFERENCE_REAL_PARTS = (4.0304e9, -5.6059e9)

DEFAULT_BETA_RANGE = (10.0, 500.0)

# minimum number of renormalizations behind a reported exponent
MIN_RENORMS = 10

# tangent components are dimensionless after renormalization
TANGENT_ABS_TOL = 1e-9


def make_grid(
    lo: float,
    hi: float,
    count: int,
    spacing: GridSpacing = GridSpacing.LINEAR,
) -> list[float]:
    """
    Sweep grid from lo to hi inclusive.

    Raises:
        InputError: count < 1, non-positive bounds for log spacing, or hi < lo
    """
    spacing = GridSpacing(spacing)
    if count < 1:
        raise InputError("sweep_count: must be >= 1", field="sweep_count")
    if hi < lo:
        raise InputError("sweep_hi: must be >= sweep_lo", field="sweep_hi")
    if count == 1:
        return [float(lo)]
    if spacing == GridSpacing.LOG:
        if lo <= 0.0:
            raise InputError("sweep_lo: must be > 0 for log spacing", field="sweep_lo")
        values = np.geomspace(lo, hi, count)
    else:
        values = np.linspace(lo, hi, count)
    values[0], values[-1] = lo, hi
    return [float(v) for v in values]


def max_real_part(
    circuit: CircuitParams,
    bjt: BjtParams,
    r_e: float,
    eq_tol: float = DEFAULT_TOL,
) -> float:
    """Largest eigenvalue real part at the equilibrium re-solved for this R_E."""
    at_r_e = circuit.with_r_e(r_e)
    eq = solve_equilibrium(at_r_e, bjt, tol=eq_tol)
    return stability_report(at_r_e, bjt, eq).max_real_part


def _evaluate_point(
    circuit: CircuitParams,
    bjt: BjtParams,
    r_e: float,
    eq_tol: float,
    zero_band: float,
) -> SweepPoint:
    try:
        at_r_e = circuit.with_r_e(r_e)
        eq = solve_equilibrium(at_r_e, bjt, tol=eq_tol)
        report = stability_report(at_r_e, bjt, eq, zero_band=zero_band)
    except ClappError as e:
        return SweepPoint(r_e=r_e, max_real_part=math.nan, classification=None, error=str(e))
    return SweepPoint(
        r_e=r_e,
        max_real_part=report.max_real_part,
        classification=report.classification,
    )


def sweep_re(
    circuit: CircuitParams,
    bjt: BjtParams,
    r_e_grid: Sequence[float],
    eq_tol: float = DEFAULT_TOL,
    zero_band: float = DEFAULT_ZERO_BAND,
    backend: SweepBackend = SweepBackend.SERIAL,
    spark: Optional[Any] = None,
) -> SweepResult:
    """
    Largest eigenvalue real part versus R_E.

    The equilibrium is re-solved at every grid point. Points are reported in
    ascending R_E whatever order the grid arrives in; for the usual ascending
    grid this is also grid order. The sort is stable, so duplicates stay
    adjacent and a rerun with a shuffled grid gives identical output. A point
    whose equilibrium or eigenvalues fail is recorded with classification None
    and the error message; the sweep goes on.

    Args:
        circuit: Template circuit; its r_e is replaced per point
        bjt: Transistor parameters
        r_e_grid: Emitter resistances (ohm), all > 0
        eq_tol: Equilibrium tolerance
        zero_band: Marginal band as a fraction of the spectral radius
        backend: SERIAL, or SPARK to evaluate points on a Spark session
        spark: SparkSession for the SPARK backend; one is created when None

    Returns:
        SweepResult
    """
    grid = [float(r) for r in r_e_grid]
    if not grid:
        raise InputError("r_e grid is empty", field="sweep_count")
    bad = [r for r in grid if not (math.isfinite(r) and r > 0.0)]
    if bad:
        raise InputError(f"r_e grid values must be finite and > 0, got {bad[0]!r}", field="r_e")
    grid.sort()

    backend = SweepBackend(backend)

    def evaluate(r_e: float) -> SweepPoint:
        return _evaluate_point(circuit, bjt, r_e, eq_tol, zero_band)

    if backend == SweepBackend.SPARK:
        if spark is None:
            with SparkSessionManager() as manager:
                points = manager.map(evaluate, grid)
        else:
            points = ordered_map(spark, evaluate, grid)
    else:
        points = [evaluate(r) for r in grid]

    for point in points:
        if point.failed:
            logger.warning("sweep point r_e=%.6g failed: %s", point.r_e, point.error)
    return SweepResult(points=tuple(points))


def locate_instability_boundary(
    circuit: CircuitParams,
    bjt: BjtParams,
    r_e_lo: float,
    r_e_hi: float,
    tol: float = 1e-3,
    eq_tol: float = DEFAULT_TOL,
    max_iter: int = 200,
) -> BoundaryResult:
    """
    Bisection on the sign of the largest eigenvalue real part.

    Stops once the bracket width is at most tol; the result keeps the final
    bracket, whose ends have opposite sign.

    Args:
        circuit: Template circuit
        bjt: Transistor parameters
        r_e_lo: Bracket end (ohm)
        r_e_hi: Other bracket end (ohm)
        tol: Bracket width to reach (ohm)
        eq_tol: Equilibrium tolerance at each evaluation
        max_iter: Bisection step cap

    Returns:
        BoundaryResult

    Raises:
        BracketError: Both ends on the same side of zero
        ConvergenceError: max_iter reached first
    """
    if not tol > 0.0:
        raise InputError("boundary_tol: must be > 0", field="boundary_tol")
    lo, hi = sorted((float(r_e_lo), float(r_e_hi)))
    if not lo > 0.0:
        raise InputError("boundary_lo: must be > 0", field="boundary_lo")

    f_lo = max_real_part(circuit, bjt, lo, eq_tol)
    f_hi = max_real_part(circuit, bjt, hi, eq_tol)
    if (f_lo > 0.0) == (f_hi > 0.0):
        state = "unstable" if f_lo > 0.0 else "stable"
        raise BracketError(
            f"no stability change on [{lo:.6g}, {hi:.6g}] ohm: both ends {state} "
            f"(max Re = {f_lo:.6g}, {f_hi:.6g} 1/s)"
        )

    iterations = 0
    while hi - lo > tol:
        if iterations >= max_iter:
            raise ConvergenceError(
                f"boundary bisection did not reach width {tol:g} in {max_iter} steps",
                best=0.5 * (lo + hi),
                iterations=iterations,
            )
        mid = 0.5 * (lo + hi)
        f_mid = max_real_part(circuit, bjt, mid, eq_tol)
        if (f_mid > 0.0) == (f_lo > 0.0):
            lo, f_lo = mid, f_mid
        else:
            hi, f_hi = mid, f_mid
        iterations += 1

    logger.debug("instability boundary in [%.17g, %.17g] after %d steps", lo, hi, iterations)
    return BoundaryResult(
        r_e=0.5 * (lo + hi),
        lo=lo,
        hi=hi,
        max_real_lo=f_lo,
        max_real_hi=f_hi,
        iterations=iterations,
    )


def find_instability_boundary(
    circuit: CircuitParams,
    bjt: BjtParams,
    r_e_lo: float,
    r_e_hi: float,
    tol: float = 1e-3,
) -> float:
    """Midpoint (ohm) of the final bracket of locate_instability_boundary."""
    return locate_instability_boundary(circuit, bjt, r_e_lo, r_e_hi, tol).r_e


def largest_lyapunov(
    circuit: CircuitParams,
    bjt: BjtParams,
    p0: State,
    horizon: float,
    renorm_interval: float,
    transient: float = 0.0,
    integrator: Optional[IntegratorConfig] = None,
) -> LyapunovEstimate:
    """
    Largest Lyapunov exponent by tangent-space renormalization.

    The tangent system d' = J(p(t)) d is integrated alongside the state from
    a unit tangent. After every renorm_interval, ln|d| is accumulated and d
    is rescaled to unit length. Intervals ending within the transient are
    excluded from the average; transient is rounded up to a whole number of
    intervals.

    Args:
        circuit: Component values
        bjt: Transistor parameters
        p0: Initial state
        horizon: Total integration time (s), >= 100 * renorm_interval
        renorm_interval: Time between renormalizations (s)
        transient: Initial time excluded from the estimate (s)
        integrator: Tolerances and step limits; t_start is the start time

    Returns:
        LyapunovEstimate whose trace holds the running estimate after each
        renormalization (over the transient until it ends, then over the
        post-transient part)

    Raises:
        IntegrationError: Integration failed; partial holds the estimate so far
    """
    cfg = integrator or IntegratorConfig()
    if not renorm_interval > 0.0:
        raise InputError("lyapunov_renorm: must be > 0", field="lyapunov_renorm")
    if horizon < 100.0 * renorm_interval * (1.0 - 1e-12):
        raise InputError(
            "lyapunov_horizon: must be >= 100 * lyapunov_renorm", field="lyapunov_horizon"
        )
    if not 0.0 <= transient < horizon:
        raise InputError("lyapunov_transient: must be in [0, horizon)", field="lyapunov_transient")

    count = int(round(horizon / renorm_interval))
    skip = int(math.ceil(transient / renorm_interval - 1e-9))
    if count - skip < MIN_RENORMS:
        raise InputError(
            f"lyapunov_transient leaves {count - skip} renormalizations, need {MIN_RENORMS}",
            field="lyapunov_transient",
        )

    solver = DormandPrince54(
        tangent_vector_field(circuit, bjt),
        rel_tol=cfg.rel_tol,
        abs_tol=np.concatenate([cfg.abs_tol, np.full(4, TANGENT_ABS_TOL)]),
        max_step=cfg.max_step,
    )

    t0 = cfg.t_start
    z = np.concatenate([p0.as_array(), np.full(4, 0.5)])
    log_sum = 0.0
    trace = np.empty(count)
    trace_times = np.empty(count)
    step = cfg.initial_step

    def estimate(filled: int) -> LyapunovEstimate:
        return LyapunovEstimate(
            lambda1=float(trace[filled - 1]) if filled else math.nan,
            horizon=filled * renorm_interval,
            renorm_count=filled,
            trace=trace[:filled].copy(),
            trace_times=trace_times[:filled].copy(),
            transient=min(filled, skip) * renorm_interval,
        )

    for k in range(1, count + 1):
        t_prev = t0 + (k - 1) * renorm_interval
        t_next = t0 + k * renorm_interval
        try:
            solution = solver.integrate(
                t_prev, z, t_next, initial_step=step, fixed_step=cfg.fixed_step
            )
        except IntegrationError as e:
            raise type(e)(str(e), e.time, estimate(k - 1)) from e

        z = solution.y_end.copy()
        step = solution.last_step
        norm = float(np.linalg.norm(z[4:]))
        if not (math.isfinite(norm) and norm > 0.0):
            raise IntegrationError(
                f"tangent vector degenerated at t={t_next:.6g} (norm {norm!r})",
                t_next,
                estimate(k - 1),
            )
        z[4:] /= norm

        if k == skip + 1:
            # transient over: restart the average
            log_sum = 0.0
        log_sum += math.log(norm)
        elapsed = (k - skip if k > skip else k) * renorm_interval
        trace[k - 1] = log_sum / elapsed
        trace_times[k - 1] = t_next

    result = estimate(count)
    logger.info(
        "lambda_1 = %.6g 1/s over %d renormalizations (%d discarded)",
        result.lambda1,
        count,
        skip,
    )
    return result


def _spectrum_mismatch(real_parts: Sequence[float], reference: Sequence[float]) -> float:
    """Largest relative error of sorted real parts against each reference value doubled."""
    targets = [reference[0], reference[0], reference[1], reference[1]]
    return max(abs(r - ref) / abs(ref) for r, ref in zip(real_parts, targets))


def calibrate_beta(
    circuit: CircuitParams,
    bjt: BjtParams,
    betas: Optional[Sequence[float]] = None,
    reference: tuple[float, float] = REFERENCE_REAL_PARTS,
    tolerance: float = 0.10,
    eq_tol: float = DEFAULT_TOL,
) -> CalibrationResult:
    """
    Current gain whose equilibrium spectrum best matches reference real parts.

    Each reference value is expected twice in the descending-sorted real
    parts, the first for the upper pair and the second for the lower pair.

    Args:
        circuit: Component values
        bjt: Transistor parameters; beta is replaced per scan point
        betas: Gains to scan; 50 log-spaced values over [10, 500] when None
        reference: (upper, lower) real parts (1/s)
        tolerance: Largest relative mismatch counted as a match

    Returns:
        CalibrationResult for the best-matching beta
    """
    if betas is None:
        betas = make_grid(*DEFAULT_BETA_RANGE, 50, GridSpacing.LOG)
    betas = [float(b) for b in betas]
    if not betas:
        raise InputError("beta grid is empty", field="beta")
    if any(r == 0.0 for r in reference):
        raise InputError("reference real parts must be non-zero")

    scanned: list[tuple[float, float]] = []
    spectra: list[tuple[float, ...]] = []
    for beta in betas:
        candidate = bjt.with_beta(beta)
        try:
            eq = solve_equilibrium(circuit, candidate, tol=eq_tol)
            report = stability_report(circuit, candidate, eq)
        except ClappError as e:
            logger.warning("calibration point beta=%.6g failed: %s", beta, e)
            scanned.append((beta, math.inf))
            spectra.append(())
            continue
        real_parts = tuple(ev.real for ev in report.eigenvalues)
        scanned.append((beta, _spectrum_mismatch(real_parts, reference)))
        spectra.append(real_parts)

    best = int(np.argmin([m for _, m in scanned]))
    beta, mismatch = scanned[best]
    if not math.isfinite(mismatch):
        raise ConvergenceError(
            "no beta in the scan produced a spectrum", best=beta, iterations=len(betas)
        )
    within = mismatch <= tolerance
    if not within:
        logger.warning(
            "no beta matches the reference real parts within %.0f%% "
            "(best beta=%.6g, mismatch %.1f%%)",
            tolerance * 100,
            beta,
            mismatch * 100,
        )
    return CalibrationResult(
        beta=beta,
        mismatch=mismatch,
        within_tolerance=within,
        real_parts=spectra[best],
        scanned=tuple(scanned),
    )
