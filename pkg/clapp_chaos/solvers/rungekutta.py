"""
Explicit Runge-Kutta Integrators.

Embedded explicit Runge-Kutta pairs with error-per-step control, FSAL stage
reuse and cubic Hermite sampling between accepted steps.

Example:
    >>> solver = DormandPrince54(f, rel_tol=1e-9, abs_tol=np.full(4, 1e-9))
    >>> solution = solver.integrate(0.0, y0, 1e-9, sample_times=np.linspace(0, 1e-9, 101))
    >>> solution.states[-1]
"""

import logging
import math
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np

from clapp_chaos.core.base import StepStatistics
from clapp_chaos.core.exceptions import (
    ExponentRangeError,
    InputError,
    IntegrationError,
    StiffnessError,
)

logger = logging.getLogger(__name__)

# smallest step (s) before the problem is declared too stiff for an explicit method
MIN_STEP = 1e-18


@dataclass
class RungeKuttaSolution:
    """
    Output of one integration run.

    Attributes:
        times: Sample times actually emitted
        states: Samples, shape (len(times), n)
        y_end: State at the final time
        f_end: Derivative at the final time
        last_step: Last accepted step size, for continuing a run
        stats: Step statistics
    """
    times: np.ndarray
    states: np.ndarray
    y_end: np.ndarray
    f_end: np.ndarray
    last_step: float
    stats: StepStatistics = field(default_factory=StepStatistics)


class ExplicitRungeKutta:
    """
    Base class for embedded explicit Runge-Kutta pairs.

    Subclasses provide the Butcher tableau. The last stage must evaluate the
    propagated solution (first-same-as-last), so the derivative at the end of
    an accepted step is reused as the first stage of the next.

    Attributes:
        order: Order of the propagated solution
        error_order: Order used in the step-size exponent
        c: Stage nodes
        a: Stage coefficient rows (row i has i entries)
        e: Error weights (propagated minus embedded)
    """

    order: int = 0
    error_order: int = 0
    c: np.ndarray = np.zeros(0)
    a: list[np.ndarray] = []
    e: np.ndarray = np.zeros(0)

    safety = 0.9
    min_factor = 0.2
    max_factor = 5.0

    def __init__(
        self,
        fun: Callable[[float, np.ndarray], np.ndarray],
        rel_tol: float,
        abs_tol: Sequence[float],
        max_step: float = math.inf,
        min_step: float = MIN_STEP,
    ):
        """
        Initialize the integrator.

        Args:
            fun: Right-hand side f(t, y)
            rel_tol: Relative tolerance
            abs_tol: Absolute tolerance per component
            max_step: Largest allowed step
            min_step: Step below which a StiffnessError is raised
        """
        if rel_tol <= 0.0:
            raise InputError("rel_tol: must be > 0", field="rel_tol")
        self.fun = fun
        self.rel_tol = rel_tol
        self.abs_tol = np.asarray(abs_tol, dtype=float)
        if np.any(self.abs_tol <= 0.0):
            raise InputError("abs_tol: must be > 0", field="abs_tol")
        self.max_step = max_step
        self.min_step = min_step
        self.stages = len(self.c)

    def _error_norm(self, err: np.ndarray, y: np.ndarray, y_new: np.ndarray) -> float:
        scale = self.abs_tol + self.rel_tol * np.maximum(np.abs(y), np.abs(y_new))
        return float(np.sqrt(np.mean((err / scale) ** 2)))

    def step(
        self,
        t: float,
        y: np.ndarray,
        f0: np.ndarray,
        h: float,
    ) -> tuple[np.ndarray, np.ndarray, float]:
        """
        One trial step of size h.

        Returns:
            (y_new, f_new, error_norm)
        """
        k = np.empty((self.stages, y.size))
        k[0] = f0
        y_stage = y
        for i in range(1, self.stages):
            y_stage = y + h * (self.a[i] @ k[:i])
            k[i] = self.fun(t + self.c[i] * h, y_stage)
        # FSAL: the last stage point is the propagated solution
        y_new = y_stage
        err = h * (self.e @ k)
        return y_new, k[-1], self._error_norm(err, y, y_new)

    def initial_step(self, t: float, y: np.ndarray, f0: np.ndarray, span: float) -> float:
        """Starting step from the usual two-evaluation estimate of the local scale."""
        scale = self.abs_tol + self.rel_tol * np.abs(y)
        d0 = float(np.sqrt(np.mean((y / scale) ** 2)))
        d1 = float(np.sqrt(np.mean((f0 / scale) ** 2)))
        h0 = 1e-6 * span if d0 < 1e-5 or d1 < 1e-5 else 0.01 * d0 / d1
        h0 = min(h0, span)
        try:
            f1 = self.fun(t + h0, y + h0 * f0)
        except (ExponentRangeError, InputError):
            return h0 * 1e-3
        d2 = float(np.sqrt(np.mean(((f1 - f0) / scale) ** 2))) / h0
        if max(d1, d2) <= 1e-15:
            h1 = max(1e-6 * span, h0 * 1e-3)
        else:
            h1 = (0.01 / max(d1, d2)) ** (1.0 / (self.order + 1))
        return min(100.0 * h0, h1)

    def integrate(
        self,
        t0: float,
        y0: Sequence[float],
        t_end: float,
        sample_times: Optional[np.ndarray] = None,
        initial_step: Optional[float] = None,
        fixed_step: Optional[float] = None,
    ) -> RungeKuttaSolution:
        """
        Integrate from t0 to t_end.

        Args:
            t0: Start time
            y0: Initial state
            t_end: End time (> t0)
            sample_times: Increasing times in [t0, t_end] to emit; defaults to
                just the end point
            initial_step: First trial step; estimated when None
            fixed_step: If set, take steps of exactly this size (the last one
                clipped to t_end) without error control

        Returns:
            RungeKuttaSolution

        Raises:
            IntegrationError: Non-finite state or junction overflow that step
                rejection could not avoid; carries the partial (times, states)
            StiffnessError: Step size fell below min_step
        """
        if not t_end > t0:
            raise InputError("t_end: must be > t_start", field="t_end")
        samples = np.array([t_end] if sample_times is None else sample_times, dtype=float)
        y = np.array(y0, dtype=float)
        if not np.all(np.isfinite(y)):
            raise InputError(f"non-finite initial state {y.tolist()!r}")

        stats = StepStatistics()
        out_t: list[float] = []
        out_y: list[np.ndarray] = []
        next_sample = 0
        while next_sample < len(samples) and samples[next_sample] <= t0:
            out_t.append(samples[next_sample])
            out_y.append(y.copy())
            next_sample += 1

        def partial():
            return np.array(out_t), np.array(out_y).reshape(len(out_t), y.size)

        t = t0
        try:
            f = np.asarray(self.fun(t, y), dtype=float)
        except (ExponentRangeError, InputError) as exc:
            t_out, y_out = partial()
            raise IntegrationError(f"cannot start at t={t:.6g}: {exc}", t, (t_out, y_out)) from exc
        stats.rhs_evaluations += 1
        span = t_end - t0
        if fixed_step is not None:
            h = fixed_step
        elif initial_step is not None:
            h = initial_step
        else:
            h = self.initial_step(t, y, f, span)
            stats.rhs_evaluations += 1

        last_accepted = h

        while t < t_end:
            h = min(h, self.max_step)
            # snap to t_end instead of leaving a sliver step
            last = t + h >= t_end - 1e-9 * h
            if last:
                h = t_end - t

            failure = None
            try:
                y_new, f_new, err = self.step(t, y, f, h)
                stats.rhs_evaluations += self.stages - 1
                if not np.all(np.isfinite(y_new)) or not np.all(np.isfinite(f_new)):
                    failure = "non-finite state"
            except (ExponentRangeError, InputError) as exc:
                failure = str(exc)

            if failure is not None:
                if fixed_step is not None:
                    t_out, y_out = partial()
                    raise IntegrationError(
                        f"integration failed at t={t:.6g}: {failure}", t, (t_out, y_out)
                    )
                stats.rejected += 1
                h *= 0.25
                if h < self.min_step:
                    t_out, y_out = partial()
                    raise IntegrationError(
                        f"integration failed at t={t:.6g}: {failure}", t, (t_out, y_out)
                    )
                continue

            if fixed_step is None and err > 1.0:
                stats.rejected += 1
                h *= max(self.min_factor, self.safety * err ** (-1.0 / self.error_order))
                if h < self.min_step:
                    t_out, y_out = partial()
                    raise StiffnessError(
                        f"step size {h:.3g} s below minimum {self.min_step:.3g} s at t={t:.6g}",
                        t,
                        (t_out, y_out),
                    )
                continue

            t_new = t_end if last else t + h
            while next_sample < len(samples) and samples[next_sample] <= t_new:
                s = samples[next_sample]
                out_t.append(s)
                if s == t_new:
                    out_y.append(y_new.copy())
                else:
                    out_y.append(self._hermite(t, y, f, t_new, y_new, f_new, s))
                next_sample += 1

            stats.record(h)
            last_accepted = h
            t, y, f = t_new, y_new, f_new
            if fixed_step is None:
                if err == 0.0:
                    factor = self.max_factor
                else:
                    factor = self.safety * err ** (-1.0 / self.error_order)
                h *= min(self.max_factor, max(self.min_factor, factor))

        times, states = partial()
        return RungeKuttaSolution(
            times=times,
            states=states,
            y_end=y,
            f_end=f,
            last_step=last_accepted,
            stats=stats,
        )

    @staticmethod
    def _hermite(
        t0: float,
        y0: np.ndarray,
        f0: np.ndarray,
        t1: float,
        y1: np.ndarray,
        f1: np.ndarray,
        s: float,
    ) -> np.ndarray:
        """Cubic Hermite interpolant through both step ends at time s."""
        h = t1 - t0
        theta = (s - t0) / h
        t2 = theta * theta
        t3 = t2 * theta
        return (
            (2.0 * t3 - 3.0 * t2 + 1.0) * y0
            + (t3 - 2.0 * t2 + theta) * h * f0
            + (-2.0 * t3 + 3.0 * t2) * y1
            + (t3 - t2) * h * f1
        )


class DormandPrince54(ExplicitRungeKutta):
    """
    Dormand-Prince 5(4) pair. Seven stages (six effective with FSAL), 5th
    order propagation with an embedded 4th order error estimate.

    Characteristics
    ---------------
    * Order: 5 (propagating) / 4 (error estimate)
    * Stages: 7, first same as last
    * Explicit, adaptive timestep
    """

    order = 5
    error_order = 5

    c = np.array([0.0, 1 / 5, 3 / 10, 4 / 5, 8 / 9, 1.0, 1.0])

    a = [
        np.array([]),
        np.array([1 / 5]),
        np.array([3 / 40, 9 / 40]),
        np.array([44 / 45, -56 / 15, 32 / 9]),
        np.array([19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729]),
        np.array([9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656]),
        np.array([35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84]),
    ]

    # 5th order weights minus embedded 4th order weights
    e = np.array([
        71 / 57600,
        0.0,
        -71 / 16695,
        71 / 1920,
        -17253 / 339200,
        22 / 525,
        -1 / 40,
    ])
