#pragma once

#include "adrsplit/oracle.hpp"
#include "adrsplit/splitting.hpp"

#include <span>
#include <string>
#include <vector>

namespace adrsplit {

struct ConvergenceReport {
    std::vector<double> dts;
    std::vector<double> errors;
    /// Error at the final time only; parabolic studies fill it.
    std::vector<double> final_time_errors;
    /// Pairwise log(e_k / e_{k+1}) / log(dt_k / dt_{k+1}); length dts.size() - 1.
    std::vector<double> observed_orders;
    /// Least-squares slope of log(error) against log(dt); NaN when undefined.
    double summary_order = 0.0;
    bool order_defined = false;
    /// Stationary studies: per-entry convergence and iteration counts.
    std::vector<bool> converged;
    std::vector<int> iterations;
    std::vector<std::string> notes;
};

struct EnergyReport {
    std::vector<bool> per_step_ok;
    std::vector<double> norms;
    /// Right-hand side of the per-step bound for step j -> j+1.
    std::vector<double> per_step_bound;
    bool global_bound_ok = true;
    double global_bound = 0.0;
    double decay_factor = 1.0;
    /// max over checks of lhs - rhs (before slack); <= 0 when everything holds.
    double worst_violation = 0.0;
    std::vector<std::string> warnings;

    bool all_ok() const;
};

/// Least-squares slope of log(error) against log(dt).
double observed_order(std::span<const double> errors, std::span<const double> dts);

/// Errors in sqrt(dt * sum_j ||u_j - u(t_j)||^2) over all recorded steps,
/// against the case's exact solution, for each dt.
ConvergenceReport parabolic_convergence_study(const ManufacturedCase& mc, const Grid2D& grid, double theta,
                                              std::span<const double> dts,
                                              const ParabolicOptions& options = {},
                                              std::vector<ScalarField>* final_states = nullptr);

/// Elliptic residual of the stationary split limit for each dt.
ConvergenceReport stationary_residual_study(const ManufacturedCase& mc, const Grid2D& grid, double theta,
                                            std::span<const double> dts, double tol, int max_iter = 20000,
                                            std::vector<ScalarField>* solutions = nullptr);

/// Checks ||u_{j+1}|| <= a ||u_j|| + a dt ||f_j|| with a = 1/(1 + sigma dt)
/// (slack 1e-10) and ||u_j|| <= ||u_0|| + T max_j ||f_j|| for a fully
/// implicit trajectory.
EnergyReport energy_check(const Trajectory& traj, const ProblemSpec& problem);

} // namespace adrsplit
