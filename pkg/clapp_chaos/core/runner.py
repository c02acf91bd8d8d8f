"""
Analysis Runner.

Runs one analysis subcommand against a RunConfig, writes its CSV output
(`<subcommand>.csv` in the output directory), re-validates the file and
reports a one-line summary. Errors are mapped to exit codes: 1 for input
errors, 2 for numeric failures.

Example:
    >>> from clapp_chaos import AnalysisRunner, get_published_config
    >>> runner = AnalysisRunner(get_published_config(output_dir="out"))
    >>> result = runner.run("eigs")
    >>> result.exit_code
    0
"""

import logging
import math
import os
import sys
from dataclasses import dataclass, field
from datetime import datetime
from typing import Any, Callable, Optional, Sequence

from clapp_chaos.analysis.chaos import (
    calibrate_beta,
    largest_lyapunov,
    locate_instability_boundary,
    make_grid,
    sweep_re,
)
from clapp_chaos.analysis.equilibrium import solve_equilibrium
from clapp_chaos.analysis.integrate import (
    dominant_period_strength,
    nearest_revisit_distance,
    perturbed_equilibrium,
    phase_projection,
    simulate,
)
from clapp_chaos.analysis.stability import stability_report
from clapp_chaos.config.settings import RunConfig, get_published_config
from clapp_chaos.core.base import (
    AnalysisStatus,
    EquilibriumPoint,
    GridSpacing,
    LyapunovEstimate,
    Stability,
    StateComponent,
    SweepBackend,
    TankMode,
    Trajectory,
)
from clapp_chaos.core.exceptions import ClappError, IntegrationError, NumericError
from clapp_chaos.model.circuit import resonant_frequency
from clapp_chaos.model.fitting import fit_exponential, generate_iv_samples
from clapp_chaos.parsers.iv_parser import IvCsvParser
from clapp_chaos.utils.file_utils import (
    ensure_directory,
    get_file_checksum,
    save_manifest,
    write_csv,
)
from clapp_chaos.utils.units import format_quantity
from clapp_chaos.validators.output_validator import OutputValidator, ValidationResult

logger = logging.getLogger(__name__)

SUBCOMMANDS = (
    "fit",
    "equilibrium",
    "eigs",
    "simulate",
    "phase",
    "sweep",
    "boundary",
    "lyapunov",
    "freq",
    "calibrate",
)

# text columns per output; every other column must hold finite numbers
LABEL_COLUMNS = {
    "sweep": ("classification",),
    "freq": ("mode",),
}

# outputs that may carry empty cells for failed points
ALLOW_MISSING = ("sweep", "calibrate")


@dataclass
class AnalysisResult:
    """
    Outcome of one subcommand.

    Attributes:
        name: Subcommand name
        status: pending, success or failed
        output_path: CSV written (also set when a partial output was written)
        row_count: Data rows in the CSV
        summary_line: One-line summary of the key result values
        values: Key result values for the manifest
        error: Error message when failed
        exit_code: 0 success, 1 input error, 2 numeric error
        validation: Re-parse check of the written CSV
        start_time: When the subcommand started
        end_time: When it finished
    """
    name: str
    status: AnalysisStatus = AnalysisStatus.PENDING
    output_path: Optional[str] = None
    row_count: int = 0
    summary_line: str = ""
    values: dict[str, Any] = field(default_factory=dict)
    error: Optional[str] = None
    exit_code: int = 0
    validation: Optional[ValidationResult] = None
    start_time: datetime = field(default_factory=datetime.now)
    end_time: Optional[datetime] = None

    @property
    def duration_seconds(self) -> Optional[float]:
        """Calculate duration in seconds."""
        if self.end_time:
            return (self.end_time - self.start_time).total_seconds()
        return None

    def to_dict(self) -> dict[str, Any]:
        """Convert to dictionary for JSON serialization."""
        return {
            "name": self.name,
            "status": self.status.value,
            "output_path": self.output_path,
            "row_count": self.row_count,
            "summary": self.summary_line,
            "values": self.values,
            "error": self.error,
            "exit_code": self.exit_code,
            "validation": self.validation.to_dict() if self.validation else None,
            "start_time": self.start_time.isoformat(),
            "end_time": self.end_time.isoformat() if self.end_time else None,
            "duration_seconds": self.duration_seconds,
        }


def _finite_or_none(value: float) -> Optional[float]:
    return value if math.isfinite(value) else None


def _fmt(value: float) -> str:
    return f"{value:.6g}"


class AnalysisRunner:
    """
    Orchestrates analysis subcommands and their CSV outputs.

    Attributes:
        config: Run configuration
        validator: Output CSV validator
        results: Results of every subcommand run so far
        seed: Seed recorded in the manifest; the analyses are deterministic

    Example:
        >>> runner = AnalysisRunner(config)
        >>> for name in ("equilibrium", "eigs", "freq"):
        ...     runner.run(name)
        >>> runner.save_manifest()
    """

    def __init__(self, config: Optional[RunConfig] = None, seed: Optional[int] = None):
        self.config = config or get_published_config()
        self.validator = OutputValidator()
        self.results: list[AnalysisResult] = []
        self.seed = seed
        self._equilibrium: Optional[EquilibriumPoint] = None

    def output_path(self, name: str) -> str:
        """Deterministic CSV path of a subcommand."""
        return os.path.join(self.config.output_dir, f"{name}.csv")

    def run(self, name: str, echo: bool = True) -> AnalysisResult:
        """
        Run one subcommand.

        Args:
            name: One of SUBCOMMANDS
            echo: Print the summary line (or the error) to stdout/stderr

        Returns:
            AnalysisResult; never raises for toolkit or file errors
        """
        result = AnalysisResult(name=name)
        self.results.append(result)

        handler: Optional[Callable[[AnalysisResult], None]] = getattr(self, f"_run_{name}", None)
        if name not in SUBCOMMANDS or handler is None:
            result.status = AnalysisStatus.FAILED
            result.error = f"unknown subcommand {name!r} (valid: {', '.join(SUBCOMMANDS)})"
            result.exit_code = 1
        else:
            logger.info("running %s (output %s)", name, self.output_path(name))
            try:
                handler(result)
                result.status = AnalysisStatus.SUCCESS
            except ClappError as e:
                result.status = AnalysisStatus.FAILED
                result.error = str(e)
                result.exit_code = e.exit_code
            except OSError as e:
                result.status = AnalysisStatus.FAILED
                result.error = f"cannot write output: {e.strerror or e}"
                result.exit_code = 1

        result.end_time = datetime.now()
        if echo:
            if result.status == AnalysisStatus.SUCCESS:
                print(result.summary_line)
            else:
                print(f"{name}: error: {result.error}", file=sys.stderr)
        return result

    def save_manifest(self, filepath: Optional[str] = None) -> str:
        """
        Write a JSON manifest of the configuration, results and output checksums.

        Returns:
            Path of the manifest
        """
        filepath = filepath or os.path.join(self.config.output_dir, "manifest.json")
        ensure_directory(os.path.dirname(filepath) or ".")
        checksums = {
            r.output_path: get_file_checksum(r.output_path)
            for r in self.results
            if r.output_path and os.path.exists(r.output_path)
        }
        save_manifest(filepath, {
            "generated_at": datetime.now().isoformat(),
            "seed": self.seed,
            "config": self.config.to_dict(),
            "results": [r.to_dict() for r in self.results],
            "checksums": checksums,
        })
        return filepath

    # ------------------------------------------------------------------
    # output

    def _write(
        self,
        result: AnalysisResult,
        header: Sequence[str],
        rows: Sequence[Sequence[Any]],
    ) -> None:
        """Write a subcommand's CSV and re-validate it."""
        path = self.output_path(result.name)
        result.row_count = write_csv(path, header, rows)
        result.output_path = path
        validation = self.validator.validate_csv(
            path,
            label_columns=LABEL_COLUMNS.get(result.name, ()),
            allow_missing=result.name in ALLOW_MISSING,
            expected_columns=list(header),
        )
        result.validation = validation
        for warning in validation.warnings:
            logger.warning("%s: %s", path, warning)
        if not validation.is_valid:
            raise NumericError(f"{path} failed validation: {'; '.join(validation.errors)}")

    # ------------------------------------------------------------------
    # shared steps

    def _solve_equilibrium(self) -> EquilibriumPoint:
        if self._equilibrium is None:
            self._equilibrium = solve_equilibrium(
                self.config.circuit,
                self.config.bjt,
                tol=self.config.equilibrium_tol,
                max_iter=self.config.max_iter,
                method=self.config.equilibrium_method,
            )
        return self._equilibrium

    def _trajectory(self, result: AnalysisResult) -> Trajectory:
        """Simulate from the perturbed equilibrium; partial output is written on failure."""
        cfg = self.config
        p0 = perturbed_equilibrium(self._solve_equilibrium(), cfg.perturbation)
        try:
            return simulate(cfg.circuit, cfg.bjt, p0, cfg.integrator)
        except IntegrationError as e:
            if isinstance(e.partial, Trajectory) and len(e.partial) and result.name == "simulate":
                self._write(result, _trajectory_header(), _trajectory_rows(e.partial))
                logger.warning("partial trajectory written to %s", result.output_path)
            raise

    # ------------------------------------------------------------------
    # subcommands

    def _run_fit(self, result: AnalysisResult) -> None:
        cfg = self.config
        if cfg.iv_file:
            samples = IvCsvParser().parse_file(cfg.iv_file)
            source = cfg.iv_file
        else:
            samples = generate_iv_samples(cfg.bjt, cfg.iv_lo, cfg.iv_hi, cfg.iv_count)
            source = "generated"
        fit = fit_exponential(samples, cfg.v_t)
        self._write(
            result,
            ["i_s", "eta", "rms_log_residual", "samples_used", "samples_rejected"],
            [[fit.i_s, fit.eta, fit.rms_log_residual, fit.samples_used, fit.samples_rejected]],
        )
        result.values = {"i_s": fit.i_s, "eta": fit.eta, "source": source}
        result.summary_line = (
            f"fit: i_s={_fmt(fit.i_s)} A eta={_fmt(fit.eta)} "
            f"({fit.samples_used} samples from {source}, {fit.samples_rejected} rejected)"
        )

    def _run_equilibrium(self, result: AnalysisResult) -> None:
        eq = self._solve_equilibrium()
        s = eq.state
        self._write(
            result,
            ["v_c1", "v_c2", "v_c3", "i_l3", "i_b_eq", "scaled_residual", "iterations"],
            [[s.v_c1, s.v_c2, s.v_c3, s.i_l3, eq.i_b_eq, eq.scaled_residual, eq.iterations]],
        )
        result.values = {"i_b_eq": eq.i_b_eq, "scaled_residual": eq.scaled_residual}
        result.summary_line = (
            f"equilibrium: v_c1={_fmt(s.v_c1)} V v_c2={_fmt(s.v_c2)} V v_c3={_fmt(s.v_c3)} V "
            f"i_b={_fmt(eq.i_b_eq)} A residual={eq.scaled_residual:.2e} "
            f"({eq.method}, {eq.iterations} iterations)"
        )

    def _run_eigs(self, result: AnalysisResult) -> None:
        cfg = self.config
        report = stability_report(
            cfg.circuit, cfg.bjt, self._solve_equilibrium(), zero_band=cfg.zero_band
        )
        self._write(
            result,
            ["index", "real", "imag"],
            [[i, ev.real, ev.imag] for i, ev in enumerate(report.eigenvalues)],
        )
        result.values = report.to_dict()
        values = " ".join(f"{ev.real:.6g}{ev.imag:+.6g}j" for ev in report.eigenvalues)
        result.summary_line = f"eigs: {values} ({report.classification.value})"

    def _run_simulate(self, result: AnalysisResult) -> None:
        traj = self._trajectory(result)
        self._write(result, _trajectory_header(), _trajectory_rows(traj))
        stats = traj.stats
        result.values = {
            "samples": len(traj),
            "accepted": stats.accepted,
            "rejected": stats.rejected,
        }
        result.summary_line = (
            f"simulate: {len(traj)} samples to t={_fmt(traj.times[-1])} s "
            f"({stats.accepted} steps, {stats.rejected} rejected)"
        )

    def _run_phase(self, result: AnalysisResult) -> None:
        cfg = self.config
        x, y = StateComponent.parse(cfg.phase_x), StateComponent.parse(cfg.phase_y)
        traj = self._trajectory(result)
        pairs = phase_projection(traj, x, y)
        self._write(result, [x.value, y.value], pairs)

        periodicity = dominant_period_strength(traj.component(x))
        revisit = nearest_revisit_distance(pairs)
        result.values = {"points": len(pairs), "period_strength": periodicity, "revisit": revisit}
        result.summary_line = (
            f"phase: {len(pairs)} points ({x.value}, {y.value}), "
            f"autocorrelation peak {periodicity:.3f}, nearest revisit {_fmt(revisit)}"
        )

    def _run_sweep(self, result: AnalysisResult) -> None:
        cfg = self.config
        spacing = GridSpacing(cfg.sweep_spacing)
        grid = make_grid(cfg.sweep_lo, cfg.sweep_hi, cfg.sweep_count, spacing)
        sweep = sweep_re(
            cfg.circuit,
            cfg.bjt,
            grid,
            eq_tol=cfg.equilibrium_tol,
            zero_band=cfg.zero_band,
            backend=SweepBackend(cfg.sweep_backend),
        )

        rows = [
            [
                p.r_e,
                _finite_or_none(p.max_real_part),
                "failed" if p.failed else p.classification.value,
            ]
            for p in sweep.points
        ]
        self._write(result, ["r_e", "max_real_part", "classification"], rows)

        unstable = sum(1 for p in sweep.points if p.classification == Stability.UNSTABLE)
        failed = sum(1 for p in sweep.points if p.failed)
        result.values = {
            "points": len(sweep),
            "unstable": unstable,
            "failed": failed,
            "sign_changes": sweep.sign_changes(),
        }
        result.summary_line = (
            f"sweep: {len(sweep)} points over r_e=[{_fmt(grid[0])}, {_fmt(grid[-1])}] ohm, "
            f"{unstable} unstable, {failed} failed, {sweep.sign_changes()} sign changes"
        )

    def _run_boundary(self, result: AnalysisResult) -> None:
        cfg = self.config
        boundary = locate_instability_boundary(
            cfg.circuit,
            cfg.bjt,
            cfg.boundary_lo,
            cfg.boundary_hi,
            tol=cfg.boundary_tol,
            eq_tol=cfg.equilibrium_tol,
            max_iter=cfg.max_iter,
        )
        self._write(
            result,
            ["boundary", "lo", "hi", "max_real_lo", "max_real_hi", "iterations"],
            [[
                boundary.r_e,
                boundary.lo,
                boundary.hi,
                boundary.max_real_lo,
                boundary.max_real_hi,
                boundary.iterations,
            ]],
        )
        result.values = {"boundary": boundary.r_e, "iterations": boundary.iterations}
        result.summary_line = (
            f"boundary: r_e={_fmt(boundary.r_e)} ohm "
            f"(bracket [{_fmt(boundary.lo)}, {_fmt(boundary.hi)}], {boundary.iterations} steps)"
        )

    def _run_lyapunov(self, result: AnalysisResult) -> None:
        cfg = self.config
        p0 = perturbed_equilibrium(self._solve_equilibrium(), cfg.perturbation)
        try:
            estimate = largest_lyapunov(
                cfg.circuit,
                cfg.bjt,
                p0,
                cfg.lyapunov_horizon,
                cfg.lyapunov_renorm,
                transient=cfg.lyapunov_transient,
                integrator=cfg.integrator,
            )
        except IntegrationError as e:
            if isinstance(e.partial, LyapunovEstimate) and e.partial.renorm_count:
                self._write(result, _lyapunov_header(), _lyapunov_rows(e.partial))
            raise

        self._write(result, _lyapunov_header(), _lyapunov_rows(estimate))
        result.values = {"lambda1": estimate.lambda1, "renorm_count": estimate.renorm_count}
        result.summary_line = (
            f"lyapunov: lambda_1={_fmt(estimate.lambda1)} 1/s over "
            f"{estimate.renorm_count} renormalizations "
            f"({'chaotic' if estimate.lambda1 > 0.0 else 'not chaotic'})"
        )

    def _run_freq(self, result: AnalysisResult) -> None:
        cfg = self.config
        freqs = {mode: resonant_frequency(cfg.circuit, mode) for mode in TankMode}
        self._write(result, ["mode", "frequency_hz"], [[m.value, f] for m, f in freqs.items()])
        selected = TankMode(cfg.tank_mode)
        result.values = {m.value: f for m, f in freqs.items()}
        result.summary_line = f"freq: {format_quantity(freqs[selected])} Hz ({selected.value})"

    def _run_calibrate(self, result: AnalysisResult) -> None:
        cfg = self.config
        betas = make_grid(
            cfg.calibration_lo, cfg.calibration_hi, cfg.calibration_count, GridSpacing.LOG
        )
        calibration = calibrate_beta(
            cfg.circuit,
            cfg.bjt,
            betas,
            tolerance=cfg.calibration_tolerance,
            eq_tol=cfg.equilibrium_tol,
        )
        self._write(
            result,
            ["beta", "mismatch"],
            [[beta, _finite_or_none(m)] for beta, m in calibration.scanned],
        )
        result.values = {
            "beta": calibration.beta,
            "mismatch": calibration.mismatch,
            "within_tolerance": calibration.within_tolerance,
        }
        verdict = "within" if calibration.within_tolerance else "outside"
        result.summary_line = (
            f"calibrate: beta={_fmt(calibration.beta)} mismatch={calibration.mismatch:.1%} "
            f"({verdict} {cfg.calibration_tolerance:.0%} tolerance)"
        )


def _trajectory_header() -> list[str]:
    return ["t"] + [c.value for c in StateComponent]


def _trajectory_rows(traj: Trajectory) -> list[list[float]]:
    return [[t, *state] for t, state in zip(traj.times.tolist(), traj.states.tolist())]


def _lyapunov_header() -> list[str]:
    return ["renorm_index", "t", "lambda_running"]


def _lyapunov_rows(estimate: LyapunovEstimate) -> list[list[float]]:
    return [
        [k, t, value]
        for k, (t, value) in enumerate(
            zip(estimate.trace_times.tolist(), estimate.trace.tolist()), start=1
        )
    ]


def run_subcommand(
    name: str,
    config: RunConfig,
    flags: Optional[dict[str, Any]] = None,
) -> int:
    """
    Run one subcommand and return its exit code.

    Args:
        name: Subcommand name
        config: Fully resolved configuration
        flags: Extra CLI flags; "seed" is recorded, "manifest" writes the
            JSON manifest after the run

    Returns:
        0 on success, 1 on input error, 2 on numeric error
    """
    flags = flags or {}
    runner = AnalysisRunner(config, seed=flags.get("seed"))
    result = runner.run(name)
    if flags.get("manifest"):
        runner.save_manifest()
    return result.exit_code
