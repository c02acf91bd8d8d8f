"""
Configuration Settings.

RunConfig holds every tunable of an analysis run as flat scalar keys, in the
order they appear in a normalized config dump. Component values default to
the published chaotic operating point.

Example:
    >>> config = get_published_config(output_dir="out")
    >>> config.r_e = 10.0
    >>> is_valid, errors = config.validate()
    >>> config.circuit.r_e
    10.0
"""

import difflib
import math
from dataclasses import asdict, dataclass, fields
from typing import Any, Optional

from clapp_chaos.core.base import (
    BjtParams,
    CircuitParams,
    GridSpacing,
    IntegratorConfig,
    StateComponent,
    SweepBackend,
    TankMode,
)
from clapp_chaos.core.exceptions import ConfigError, InputError
from clapp_chaos.utils.units import format_quantity, parse_quantity

# spelling of an unset optional value in config text
NONE_TEXT = "none"


@dataclass
class RunConfig:
    """
    Configuration of an analysis run.

    Attributes:
        i_s, beta, eta, v_t, exponent_cap: Transistor model (see BjtParams)
        c1, c2, c3, l3, r1, r2, r_e, v_cc: Circuit values (see CircuitParams)
        equilibrium_tol: Relative tolerance on the equilibrium base current
        equilibrium_method: "newton" or "bisect"
        max_iter: Root-finder iteration cap
        zero_band: Marginal band as a fraction of the spectral radius
        tank_mode: "two-cap" or "three-cap" resonance formula
        rel_tol, abs_tol_v, abs_tol_i: Integrator tolerances (voltages, current)
        t_start, t_end, max_step, initial_step, fixed_step, sample_interval:
            Integration horizon, step limits and output sampling (s)
        perturbation: v_C1 offset of the default initial state from p_eq (V)
        phase_x, phase_y: State components of the phase projection
        sweep_lo, sweep_hi, sweep_count, sweep_spacing, sweep_backend: R_E sweep grid
        boundary_lo, boundary_hi, boundary_tol: Instability boundary bracket (ohm)
        lyapunov_horizon, lyapunov_renorm, lyapunov_transient: Lyapunov run (s)
        calibration_lo, calibration_hi, calibration_count, calibration_tolerance:
            Beta calibration scan
        iv_file: Two-column I-V CSV for the fit; generated samples when None
        iv_lo, iv_hi, iv_count: Generated I-V grid (V)
        output_dir: Directory for CSV outputs
    """
    i_s: float = 47.1e-12
    beta: float = 100.0
    eta: float = 0.7894
    v_t: float = 25.85e-3
    exponent_cap: float = 700.0

    c1: float = 2e-12
    c2: float = 2e-12
    c3: float = 0.1e-12
    l3: float = 0.753e-9
    r1: float = 5e3
    r2: float = 7e3
    r_e: float = 500.0
    v_cc: float = 12.0

    equilibrium_tol: float = 1e-12
    equilibrium_method: str = "newton"
    max_iter: int = 200
    zero_band: float = 1e-3
    tank_mode: str = TankMode.TWO_CAP.value

    rel_tol: float = 1e-9
    abs_tol_v: float = 1e-9
    abs_tol_i: float = 1e-12
    t_start: float = 0.0
    t_end: float = 200e-9
    max_step: float = math.inf
    initial_step: Optional[float] = None
    fixed_step: Optional[float] = None
    sample_interval: float = 1e-12
    perturbation: float = 1e-3
    phase_x: str = StateComponent.V_C1.value
    phase_y: str = StateComponent.V_C2.value

    sweep_lo: float = 1.0
    sweep_hi: float = 500.0
    sweep_count: int = 50
    sweep_spacing: str = GridSpacing.LOG.value
    sweep_backend: str = SweepBackend.SERIAL.value

    boundary_lo: float = 1.0
    boundary_hi: float = 500.0
    boundary_tol: float = 1e-3

    lyapunov_horizon: float = 200e-9
    lyapunov_renorm: float = 10e-12
    lyapunov_transient: float = 0.0

    calibration_lo: float = 10.0
    calibration_hi: float = 500.0
    calibration_count: int = 50
    calibration_tolerance: float = 0.10

    iv_file: Optional[str] = None
    iv_lo: float = 0.5
    iv_hi: float = 0.8
    iv_count: int = 50

    output_dir: str = "output"

    @property
    def bjt(self) -> BjtParams:
        """Transistor parameters (validated on construction)."""
        return BjtParams(
            i_s=self.i_s,
            beta=self.beta,
            eta=self.eta,
            v_t=self.v_t,
            exponent_cap=self.exponent_cap,
        )

    @property
    def circuit(self) -> CircuitParams:
        """Circuit values (validated on construction)."""
        return CircuitParams(
            c1=self.c1,
            c2=self.c2,
            c3=self.c3,
            l3=self.l3,
            r1=self.r1,
            r2=self.r2,
            r_e=self.r_e,
            v_cc=self.v_cc,
        )

    @property
    def integrator(self) -> IntegratorConfig:
        """Integrator settings (validated on construction)."""
        return IntegratorConfig(
            rel_tol=self.rel_tol,
            abs_tol=(self.abs_tol_v, self.abs_tol_v, self.abs_tol_v, self.abs_tol_i),
            t_start=self.t_start,
            t_end=self.t_end,
            max_step=self.max_step,
            initial_step=self.initial_step,
            sample_interval=self.sample_interval,
            fixed_step=self.fixed_step,
        )

    @classmethod
    def keys(cls) -> list[str]:
        """All configuration keys in canonical order."""
        return [f.name for f in fields(cls)]

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> "RunConfig":
        """
        Create configuration from a dictionary; missing keys keep defaults.

        Raises:
            ConfigError: Unknown key (with the nearest valid key suggested)
        """
        for key in data:
            if key not in CONFIG_KINDS:
                raise ConfigError(unknown_key_message(key), key=key)
        return cls(**data)

    @classmethod
    def from_file(cls, filepath: str) -> "RunConfig":
        """
        Load configuration from a key = value file.

        Args:
            filepath: Path to the configuration file

        Returns:
            RunConfig instance
        """
        from clapp_chaos.parsers.config_parser import ConfigParser

        return ConfigParser().parse_file(filepath)

    def to_dict(self) -> dict[str, Any]:
        """Convert configuration to dictionary."""
        return asdict(self)

    def dump(self) -> str:
        """Normalized key = value text; parsing it reproduces this config exactly."""
        lines = [f"{key} = {format_value(key, value)}" for key, value in self.to_dict().items()]
        return "\n".join(lines) + "\n"

    def save(self, filepath: str) -> None:
        """
        Save configuration in normalized key = value form.

        Args:
            filepath: Path to save the configuration
        """
        with open(filepath, "w", encoding="utf-8") as f:
            f.write(self.dump())

    def validate(self) -> tuple[bool, list[str]]:
        """
        Validate the configuration.

        Returns:
            Tuple of (is_valid, error_messages); each message starts with the
            offending key
        """
        errors = [f"{key}: {message}" for key, message in self._problems()]
        return len(errors) == 0, errors

    def check(self) -> None:
        """
        Raise on the first invalid key.

        Raises:
            ConfigError: Naming the offending key
        """
        problems = self._problems()
        if problems:
            key, message = problems[0]
            raise ConfigError(f"{key}: {message}", key=key)

    def _problems(self) -> list[tuple[str, str]]:
        problems: list[tuple[str, str]] = []
        for build in (lambda: self.bjt, lambda: self.circuit, lambda: self.integrator):
            try:
                build()
            except InputError as e:
                key = e.field or "config"
                # integrator abs_tol is split into two config keys
                if key == "abs_tol":
                    key = "abs_tol_v" if self.abs_tol_v <= 0.0 else "abs_tol_i"
                problems.append((key, str(e).split(": ", 1)[-1]))

        for key, kind in CONFIG_KINDS.items():
            value = getattr(self, key)
            if isinstance(kind, tuple) and value not in kind:
                problems.append((key, f"must be one of {', '.join(kind)}, got {value!r}"))
        if self.phase_x == self.phase_y:
            problems.append(("phase_y", "must differ from phase_x"))

        positive = [
            "equilibrium_tol",
            "boundary_tol",
            "lyapunov_horizon",
            "lyapunov_renorm",
            "calibration_tolerance",
        ]
        for key in positive:
            if not getattr(self, key) > 0.0:
                problems.append((key, "must be > 0"))
        if not self.zero_band >= 0.0:
            problems.append(("zero_band", "must be >= 0"))
        if not 0.0 <= self.lyapunov_transient < self.lyapunov_horizon:
            problems.append(("lyapunov_transient", "must be in [0, lyapunov_horizon)"))
        if self.max_iter < 1:
            problems.append(("max_iter", "must be >= 1"))
        if self.sweep_count < 1:
            problems.append(("sweep_count", "must be >= 1"))
        if self.calibration_count < 1:
            problems.append(("calibration_count", "must be >= 1"))
        if self.iv_count < 2:
            problems.append(("iv_count", "must be >= 2"))
        for lo, hi in [
            ("sweep_lo", "sweep_hi"),
            ("boundary_lo", "boundary_hi"),
            ("calibration_lo", "calibration_hi"),
            ("iv_lo", "iv_hi"),
        ]:
            if getattr(self, hi) < getattr(self, lo):
                problems.append((hi, f"must be >= {lo}"))
        for key in ("sweep_lo", "boundary_lo", "calibration_lo"):
            if not getattr(self, key) > 0.0:
                problems.append((key, "must be > 0"))
        return problems


# value kind per key: a type, or a tuple of allowed strings
CONFIG_KINDS: dict[str, Any] = {
    f.name: f.type for f in fields(RunConfig)
}
CONFIG_KINDS.update({
    "equilibrium_method": ("newton", "bisect"),
    "tank_mode": tuple(m.value for m in TankMode),
    "phase_x": tuple(c.value for c in StateComponent),
    "phase_y": tuple(c.value for c in StateComponent),
    "sweep_spacing": tuple(s.value for s in GridSpacing),
    "sweep_backend": tuple(b.value for b in SweepBackend),
})


def unknown_key_message(key: str) -> str:
    """Error text for an unknown key, with the nearest valid key if any."""
    message = f"unknown key {key!r}"
    close = difflib.get_close_matches(key, list(CONFIG_KINDS), n=1)
    if close:
        message += f"; did you mean {close[0]!r}?"
    return message


def parse_value(key: str, text: str) -> Any:
    """
    Convert config text to the Python value of a key.

    Raises:
        ConfigError: Unknown key or malformed value
    """
    if key not in CONFIG_KINDS:
        raise ConfigError(unknown_key_message(key), key=key)
    kind = CONFIG_KINDS[key]
    raw = text.strip()

    if kind in (Optional[float], Optional[str]):
        if raw.lower() == NONE_TEXT or raw == "":
            return None
        kind = float if kind == Optional[float] else str

    try:
        if kind is float:
            return parse_quantity(raw)
        if kind is int:
            value = parse_quantity(raw)
            if not value.is_integer():
                raise InputError(f"not an integer: {raw!r}")
            return int(value)
    except InputError as e:
        raise ConfigError(f"{key}: {e}", key=key) from None

    if isinstance(kind, tuple):
        return raw.lower()
    return raw


def format_value(key: str, value: Any) -> str:
    """Config text of a value, as written by RunConfig.dump."""
    if value is None:
        return NONE_TEXT
    if isinstance(value, float):
        return format_quantity(value)
    return str(value)


def get_published_config(output_dir: str = "output") -> RunConfig:
    """
    Get the published chaotic operating point as a RunConfig.

    V_CC = 12 V, R1 = 5 kohm, R2 = 7 kohm, R_E = 500 ohm, C1 = C2 = 2 pF,
    C3 = 0.1 pF, L3 = 0.753 nH, I_S = 47.1 pA, eta = 0.7894. The current gain
    is not published; beta = 100 is an assumption.

    Args:
        output_dir: Output directory path

    Returns:
        RunConfig with the published values
    """
    return RunConfig(output_dir=output_dir)
