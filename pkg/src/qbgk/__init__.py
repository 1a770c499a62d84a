"""Stationary quantum BGK slab solver for bosons and fermions."""

from .equilibrium import (
    EquilibriumParams,
    MomentTriple,
    Regime,
    RegimeTag,
    analytic_moments,
    classify,
    evaluate,
    solve_parameters,
)
from .errors import (
    ConfigError,
    DomainError,
    GridMismatchError,
    InvariantError,
    NonConvergenceError,
    QbgkError,
    RangeError,
    RegimeError,
)
from .fixed_point import (
    LambdaReport,
    LambdaViolationError,
    SolutionReport,
    contraction_estimate,
    lambda_check,
    picard_solve,
)
from .phase_grid import (
    DistributionField,
    Grid,
    GridSpec,
    build_grid,
    compute_moments,
    dyadic_p1_panels,
    weighted_distance,
)
from .quantum_stats import (
    QuadratureSpec,
    Statistics,
    beta,
    beta_inverse,
    beta_threshold,
    energy_integral,
    mass_integral,
)
from .theorem_check import (
    TheoremConstants,
    boundary_constants,
    check_main_assumptions,
    example_k_lower_bound,
    example_ratio_closed_form,
    parameter_bounds,
    slab_example_boundary,
)
from .transport import (
    BoundaryData,
    GriddedBoundary,
    SlabExampleBoundary,
    apply_solution_operator,
    attenuation_kernel_integral,
    cumulative_density,
    equilibrium_trace_boundary,
    initial_iterate,
)

__version__ = "0.1.0"
