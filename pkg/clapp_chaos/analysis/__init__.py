"""
Analysis Module.

Analyses built on the oscillator model:
    - equilibrium: scalar reduction and safeguarded root solve
    - stability: Jacobian, nonlinearity, eigenvalues, classification
    - integrate: adaptive time integration and trajectory diagnostics
    - chaos: R_E sweeps, instability boundary, Lyapunov exponent, beta calibration
"""

from clapp_chaos.analysis.chaos import (
    calibrate_beta,
    find_instability_boundary,
    largest_lyapunov,
    locate_instability_boundary,
    make_grid,
    max_real_part,
    sweep_re,
)
from clapp_chaos.analysis.equilibrium import (
    equilibrium_residual,
    residual_scales,
    solve_equilibrium,
    zero_drive_base_current,
)
from clapp_chaos.analysis.integrate import (
    autocorrelation,
    dominant_period_strength,
    nearest_revisit_distance,
    perturbed_equilibrium,
    phase_projection,
    simulate,
)
from clapp_chaos.analysis.stability import (
    classify,
    eigenvalues,
    jacobian,
    linear_solution,
    nonlinearity,
    stability_report,
    tangent_vector_field,
)

__all__ = [
    "solve_equilibrium",
    "equilibrium_residual",
    "residual_scales",
    "zero_drive_base_current",
    "jacobian",
    "nonlinearity",
    "eigenvalues",
    "classify",
    "stability_report",
    "tangent_vector_field",
    "linear_solution",
    "simulate",
    "perturbed_equilibrium",
    "phase_projection",
    "autocorrelation",
    "dominant_period_strength",
    "nearest_revisit_distance",
    "make_grid",
    "max_real_part",
    "sweep_re",
    "locate_instability_boundary",
    "find_instability_boundary",
    "largest_lyapunov",
    "calibrate_beta",
]
