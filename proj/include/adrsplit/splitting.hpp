#pragma once

#include "adrsplit/grid.hpp"
#include "adrsplit/operators.hpp"
#include "adrsplit/problem.hpp"

#include <vector>

namespace adrsplit {

struct Trajectory {
    double dt = 0.0;
    double theta = 1.0;
    /// Physical time advanced per full step, in units of dt (1 by default).
    double time_scale = 1.0;
    int step_count = 0;
    /// u_0 .. u_{step_count}.
    std::vector<ScalarField> states;
    /// u_{j+1/2}; empty unless requested.
    std::vector<ScalarField> half_states;
    /// Discrete L2 norm of the source used in step j.
    std::vector<double> source_norms;

    double time(int j) const { return j * dt * time_scale; }
};

struct ParabolicOptions {
    bool record_half_states = false;
    /// Label step j with t = 2 j dt instead of j dt. Diagnostic only; the
    /// default reading is one full step per dt.
    bool double_time_axis = false;
};

struct StationaryResult {
    ScalarField solution;
    int iterations = 0;
    bool converged = false;
    /// ||u_{j+1} - u_j|| at the last iteration.
    double final_update_norm = 0.0;
    /// ||A_h u - f_h|| for the unsplit discrete elliptic operator.
    double elliptic_residual = 0.0;
};

/// Solves B_theta u_half = B_{theta-1} u + dt f row by row.
ScalarField advection_substep(const ScalarField& u, const SplitOperators& ops, const ScalarField& f);
/// Solves R_theta u_next = R_{theta-1} u_half column by column.
ScalarField diffusion_substep(const ScalarField& u_half, const SplitOperators& ops);
/// One full split step.
ScalarField step(const ScalarField& u, const SplitOperators& ops, const ScalarField& f);

/// Runs ceil(horizon/dt) split steps from the sampled initial state.
/// A time-dependent source is sampled at t_j + theta dt for step j.
/// Requires theta >= 1/2.
Trajectory solve_parabolic(const ProblemSpec& problem, const Grid2D& grid, double theta, double dt,
                           const ParabolicOptions& options = {});

/// Row-wise solve of (-mu Dxx + beta Dx + sigma) u0 = f with zero line ends.
ScalarField initial_guess_stationary(const ProblemSpec& problem, const Grid2D& grid);

/// Iterates step() at fixed dt from initial_guess_stationary until the update
/// norm drops to tol. Requires theta > 1/2 strictly.
StationaryResult solve_stationary(const ProblemSpec& problem, const Grid2D& grid, double theta, double dt,
                                  double tol = 1e-10, int max_iter = 2000);

/// ||A_h u - f_h|| with f sampled at t = 0.
double elliptic_residual(const ProblemSpec& problem, const ScalarField& u);

} // namespace adrsplit
