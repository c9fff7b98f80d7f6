"""Directional diffusion splitting for 2-D advection-diffusion-reaction problems.

Fields are numpy arrays of shape (n, n) indexed ``[iy, ix]`` over the
interior nodes of the unit square.
"""

from ._adrsplit import (
    Grid,
    Problem,
    SingularSystemError,
    SolverBreakdown,
    discrete_l2_norm,
    energy_check,
    estimate_operator_norm,
    make_grid,
    observed_order,
    parabolic_convergence_study,
    reference_elliptic,
    sample_exact,
    set_worker_count,
    solve_parabolic,
    solve_stationary,
    stationary_residual_study,
    validate_advection,
    worker_count,
)

__all__ = [
    "Grid",
    "Problem",
    "SingularSystemError",
    "SolverBreakdown",
    "discrete_l2_norm",
    "energy_check",
    "estimate_operator_norm",
    "make_grid",
    "observed_order",
    "parabolic_convergence_study",
    "reference_elliptic",
    "sample_exact",
    "set_worker_count",
    "solve_parabolic",
    "solve_stationary",
    "stationary_residual_study",
    "validate_advection",
    "worker_count",
]
