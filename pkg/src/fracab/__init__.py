"""Two-step explicit time stepping for integer-order and Caputo-fractional
PDEs: level-dependent weight pairs, forward/centered spatial stencils,
stability margins and probes, exact-solution oracles, and a CLI harness.

The fractional scheme advances with only the two most recent levels; the
history sum usual for Caputo discretizations never appears.
"""

from .cli import (
    ConfigError,
    ConvergenceRow,
    RunConfig,
    RunReport,
    SweepRow,
    convergence_study,
    main,
    parse_config,
    run_simulation,
    stability_sweep,
)
from .mesh import FieldState, SpaceTimeGrid, make_uniform_grid
from .reference import (
    OracleSolution,
    exact_advection,
    exact_fractional_diffusion_mode,
    l1_fractional_ode_solve,
    mittag_leffler,
)
from .spatial import BoundarySpec, advection_rhs, apply_boundary, diffusion_rhs
from .stability import (
    AmplificationTrace,
    StabilityMargin,
    amplification_probe,
    classical_margin,
    fractional_margin,
    max_second_time_difference,
    residual_bound,
)
from .steppers import (
    CLASSICAL_AB2,
    FRACTIONAL_AB2,
    InstabilityError,
    RhsEvaluator,
    SchemeKind,
    ab2_step,
    advance,
    bootstrap_step,
    fab2_step,
)
from .weights import StepWeights, delta_weight_table, delta_weights, gamma_fn, kernel_moment_oracle

__version__ = "0.1.0"

__all__ = [
    "AmplificationTrace",
    "BoundarySpec",
    "CLASSICAL_AB2",
    "ConfigError",
    "ConvergenceRow",
    "FRACTIONAL_AB2",
    "FieldState",
    "InstabilityError",
    "OracleSolution",
    "RhsEvaluator",
    "RunConfig",
    "RunReport",
    "SchemeKind",
    "SpaceTimeGrid",
    "StabilityMargin",
    "StepWeights",
    "SweepRow",
    "ab2_step",
    "advance",
    "advection_rhs",
    "amplification_probe",
    "apply_boundary",
    "bootstrap_step",
    "classical_margin",
    "convergence_study",
    "delta_weight_table",
    "delta_weights",
    "diffusion_rhs",
    "exact_advection",
    "exact_fractional_diffusion_mode",
    "fab2_step",
    "fractional_margin",
    "gamma_fn",
    "kernel_moment_oracle",
    "l1_fractional_ode_solve",
    "main",
    "make_uniform_grid",
    "max_second_time_difference",
    "mittag_leffler",
    "parse_config",
    "residual_bound",
    "run_simulation",
    "stability_sweep",
]
