"""
Base data structures for oscillator analysis.

Provides the parameter sets, state vector and result containers shared by
every analysis (equilibrium, stability, integration, chaos sweeps).

All quantities are SI: farads, henries, ohms, volts, amperes, seconds.
"""

import math
from dataclasses import dataclass, field, fields, replace
from enum import Enum
from typing import Any, Optional, Sequence

import numpy as np

from clapp_chaos.core.exceptions import InputError


class AnalysisStatus(Enum):
    """Status of an analysis run."""
    PENDING = "pending"
    SUCCESS = "success"
    FAILED = "failed"


class Stability(Enum):
    """Local stability class of an equilibrium."""
    STABLE = "stable"
    MARGINAL = "marginal"
    UNSTABLE = "unstable"


class TankMode(Enum):
    """Series capacitance used for the resonant frequency."""
    TWO_CAP = "two-cap"
    THREE_CAP = "three-cap"


class GridSpacing(Enum):
    """Spacing of a parameter sweep grid."""
    LINEAR = "linear"
    LOG = "log"


class SweepBackend(Enum):
    """Execution backend for parameter sweeps."""
    SERIAL = "serial"
    SPARK = "spark"


class StateComponent(Enum):
    """Named components of the state vector p = [v_C1, v_C2, v_C3, i_L3]."""
    V_C1 = "v_c1"
    V_C2 = "v_c2"
    V_C3 = "v_c3"
    I_L3 = "i_l3"

    @property
    def index(self) -> int:
        """Position of the component in the state vector."""
        return _COMPONENT_ORDER.index(self)

    @classmethod
    def parse(cls, name: "str | StateComponent") -> "StateComponent":
        """Look up a component by id, raising InputError when unknown."""
        if isinstance(name, cls):
            return name
        try:
            return cls(str(name).strip().lower())
        except ValueError:
            valid = ", ".join(c.value for c in cls)
            raise InputError(f"unknown state component {name!r} (valid: {valid})") from None


_COMPONENT_ORDER = [
    StateComponent.V_C1,
    StateComponent.V_C2,
    StateComponent.V_C3,
    StateComponent.I_L3,
]


def _require(condition: bool, name: str, message: str) -> None:
    if not condition:
        raise InputError(f"{name}: {message}", field=name)


@dataclass(frozen=True)
class BjtParams:
    """
    Large-signal transistor model constants.

    The collector current law is i_C = I_S (exp(eta v_BE / V_T) - 1).

    Attributes:
        i_s: Saturation current (A)
        beta: Forward current gain
        eta: Exponential slope factor
        v_t: Thermal voltage (V)
        exponent_cap: Largest eta v / V_T accepted before raising a range error

    Example:
        >>> bjt = BjtParams(i_s=47.1e-12, beta=100.0, eta=0.7894)
    """
    i_s: float
    beta: float = 100.0
    eta: float = 1.0
    v_t: float = 25.85e-3
    exponent_cap: float = 700.0

    def __post_init__(self):
        for f in fields(self):
            _require(math.isfinite(getattr(self, f.name)), f.name, "must be finite")
        _require(self.i_s >= 0.0, "i_s", "must be >= 0")
        _require(self.beta > 0.0, "beta", "must be > 0")
        _require(self.eta > 0.0, "eta", "must be > 0")
        _require(self.v_t > 0.0, "v_t", "must be > 0")
        _require(self.exponent_cap > 0.0, "exponent_cap", "must be > 0")

    def with_beta(self, beta: float) -> "BjtParams":
        """Copy with a different current gain."""
        return replace(self, beta=beta)


@dataclass(frozen=True)
class CircuitParams:
    """
    Passive component values and supply of the Clapp oscillator.

    Attributes:
        c1: Base-emitter capacitor (F)
        c2: Emitter capacitor (F)
        c3: Series tank capacitor (F)
        l3: Tank inductor (H)
        r1: Upper bias resistor (ohm)
        r2: Lower bias resistor (ohm)
        r_e: Emitter resistor (ohm)
        v_cc: Supply voltage (V)
    """
    c1: float
    c2: float
    c3: float
    l3: float
    r1: float
    r2: float
    r_e: float
    v_cc: float

    def __post_init__(self):
        for f in fields(self):
            _require(math.isfinite(getattr(self, f.name)), f.name, "must be finite")
            if f.name != "v_cc":
                _require(getattr(self, f.name) > 0.0, f.name, "must be > 0")

    @property
    def bias_conductance(self) -> float:
        """1/R1 + 1/R2."""
        return 1.0 / self.r1 + 1.0 / self.r2

    def with_r_e(self, r_e: float) -> "CircuitParams":
        """Copy with a different emitter resistance."""
        return replace(self, r_e=r_e)


@dataclass(frozen=True)
class State:
    """
    State vector p = [v_C1, v_C2, v_C3, i_L3].

    Also used for state derivatives (V/s x3, A/s).
    """
    v_c1: float
    v_c2: float
    v_c3: float
    i_l3: float

    def __post_init__(self):
        for f in fields(self):
            _require(math.isfinite(getattr(self, f.name)), f.name, "must be finite")

    @classmethod
    def from_array(cls, values: Sequence[float]) -> "State":
        """Build from any length-4 sequence."""
        if len(values) != 4:
            raise InputError(f"state needs 4 components, got {len(values)}")
        return cls(*(float(v) for v in values))

    def as_array(self) -> np.ndarray:
        """State as a float64 array in canonical order."""
        return np.array([self.v_c1, self.v_c2, self.v_c3, self.i_l3], dtype=float)

    def component(self, which: "str | StateComponent") -> float:
        """Value of a named component."""
        return getattr(self, StateComponent.parse(which).value)

    def __add__(self, other: "State") -> "State":
        return State.from_array(self.as_array() + other.as_array())


@dataclass(frozen=True)
class IvSample:
    """One point of a measured or simulated I_DC(V_BE) characteristic."""
    v_be: float
    i_dc: float


@dataclass(frozen=True)
class EquilibriumPoint:
    """
    Solved equilibrium of the oscillator.

    Attributes:
        state: Equilibrium state p_eq (i_l3 is exactly 0)
        i_b_eq: Equilibrium base current (A)
        residual: rhs at p_eq, per component
        scaled_residual: max-norm of the residual divided by component scales
        iterations: Solver iterations used
        method: Root-finding path used ("newton" or "bisect")
    """
    state: State
    i_b_eq: float
    residual: tuple[float, float, float, float]
    scaled_residual: float
    iterations: int = 0
    method: str = "newton"


@dataclass(frozen=True, eq=False)
class StabilityReport:
    """
    Linear stability of an equilibrium.

    Attributes:
        jacobian: 4x4 Jacobian at the equilibrium
        eigenvalues: Eigenvalues sorted by descending real, then imaginary part
        max_real_part: Largest eigenvalue real part (1/s)
        classification: stable, marginal or unstable
        zero_band: Absolute half-width of the marginal band (1/s)
    """
    jacobian: np.ndarray
    eigenvalues: tuple[complex, ...]
    max_real_part: float
    classification: Stability
    zero_band: float

    @property
    def is_unstable(self) -> bool:
        return self.classification == Stability.UNSTABLE

    @property
    def spectral_radius(self) -> float:
        return max(abs(ev) for ev in self.eigenvalues)

    def to_dict(self) -> dict[str, Any]:
        """Convert to dictionary for JSON serialization."""
        return {
            "jacobian": self.jacobian.tolist(),
            "eigenvalues": [[ev.real, ev.imag] for ev in self.eigenvalues],
            "max_real_part": self.max_real_part,
            "classification": self.classification.value,
            "zero_band": self.zero_band,
        }


@dataclass(frozen=True)
class IntegratorConfig:
    """
    Settings for adaptive time integration.

    Attributes:
        rel_tol: Relative tolerance
        abs_tol: Absolute tolerance per state component
        t_start: Start time (s)
        t_end: End time (s)
        max_step: Largest allowed step (s)
        initial_step: First trial step (s); None selects it automatically
        sample_interval: Output sampling interval (s)
        fixed_step: If set, disables error control and steps with this size
    """
    rel_tol: float = 1e-9
    abs_tol: tuple[float, float, float, float] = (1e-9, 1e-9, 1e-9, 1e-12)
    t_start: float = 0.0
    t_end: float = 200e-9
    max_step: float = math.inf
    initial_step: Optional[float] = None
    sample_interval: float = 1e-12
    fixed_step: Optional[float] = None

    def __post_init__(self):
        _require(self.rel_tol > 0.0, "rel_tol", "must be > 0")
        _require(len(self.abs_tol) == 4, "abs_tol", "needs one value per state component")
        _require(all(a > 0.0 for a in self.abs_tol), "abs_tol", "must be > 0")
        _require(math.isfinite(self.t_start), "t_start", "must be finite")
        _require(self.t_end > self.t_start, "t_end", "must be > t_start")
        _require(self.max_step > 0.0, "max_step", "must be > 0")
        _require(self.sample_interval > 0.0, "sample_interval", "must be > 0")
        if self.initial_step is not None:
            _require(self.initial_step > 0.0, "initial_step", "must be > 0")
        if self.fixed_step is not None:
            _require(self.fixed_step > 0.0, "fixed_step", "must be > 0")

    def sample_times(self) -> np.ndarray:
        """Output times: multiples of sample_interval from t_start, plus t_end."""
        span = self.t_end - self.t_start
        count = int(math.floor(span / self.sample_interval * (1.0 + 1e-12))) + 1
        times = self.t_start + self.sample_interval * np.arange(count, dtype=float)
        times = times[times < self.t_end - 1e-6 * self.sample_interval]
        return np.append(times, self.t_end)


@dataclass
class StepStatistics:
    """Step counters collected by the integrator."""
    accepted: int = 0
    rejected: int = 0
    min_step: float = math.inf
    max_step: float = 0.0
    rhs_evaluations: int = 0

    def record(self, h: float) -> None:
        self.accepted += 1
        self.min_step = min(self.min_step, h)
        self.max_step = max(self.max_step, h)


@dataclass(eq=False)
class Trajectory:
    """
    Sampled solution of the state equations.

    Attributes:
        times: Sample times (s), strictly increasing
        states: Array of shape (len(times), 4)
        stats: Integrator step statistics
    """
    times: np.ndarray
    states: np.ndarray
    stats: StepStatistics = field(default_factory=StepStatistics)

    def __len__(self) -> int:
        return len(self.times)

    def component(self, which: "str | StateComponent") -> np.ndarray:
        return self.states[:, StateComponent.parse(which).index]


@dataclass(frozen=True)
class SweepPoint:
    """One R_E grid point of a stability sweep."""
    r_e: float
    max_real_part: float
    classification: Optional[Stability]
    error: Optional[str] = None

    @property
    def failed(self) -> bool:
        return self.classification is None


@dataclass(frozen=True)
class SweepResult:
    """Maximum eigenvalue real part versus R_E, in ascending R_E."""
    points: tuple[SweepPoint, ...]

    def __len__(self) -> int:
        return len(self.points)

    def sign_changes(self) -> int:
        """Number of sign changes of max_real_part across successful points."""
        signs = [p.max_real_part > 0.0 for p in self.points if not p.failed]
        return sum(1 for a, b in zip(signs, signs[1:]) if a != b)


@dataclass(frozen=True)
class BoundaryResult:
    """
    Outcome of the instability-boundary bisection.

    Attributes:
        r_e: Midpoint of the final bracket (ohm)
        lo: Final bracket lower end
        hi: Final bracket upper end
        max_real_lo: Max eigenvalue real part at lo
        max_real_hi: Max eigenvalue real part at hi
        iterations: Bisection steps taken
    """
    r_e: float
    lo: float
    hi: float
    max_real_lo: float
    max_real_hi: float
    iterations: int


@dataclass(frozen=True, eq=False)
class LyapunovEstimate:
    """
    Largest Lyapunov exponent estimate.

    Attributes:
        lambda1: Estimate (1/s)
        horizon: Integrated time span (s)
        renorm_count: Number of renormalizations performed
        trace: Running estimate after each renormalization
        trace_times: Time of each renormalization
        transient: Initial time excluded from the average (s)
    """
    lambda1: float
    horizon: float
    renorm_count: int
    trace: np.ndarray
    trace_times: np.ndarray
    transient: float = 0.0


@dataclass(frozen=True)
class CalibrationResult:
    """
    Result of matching eigenvalue real parts against reference values.

    Attributes:
        beta: Current gain with the smallest mismatch
        mismatch: Largest relative error of the sorted real parts at beta
        within_tolerance: Whether mismatch <= tolerance
        real_parts: Sorted eigenvalue real parts at beta
        scanned: (beta, mismatch) for every scanned grid point
    """
    beta: float
    mismatch: float
    within_tolerance: bool
    real_parts: tuple[float, ...]
    scanned: tuple[tuple[float, float], ...]
