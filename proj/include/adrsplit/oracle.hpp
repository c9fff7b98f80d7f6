#pragma once

#include "adrsplit/grid.hpp"
#include "adrsplit/problem.hpp"
#include "adrsplit/splitting.hpp"

#include <functional>
#include <string>

namespace adrsplit {

/// A problem whose exact solution is known by construction.
struct ManufacturedCase {
    std::string id;
    ProblemSpec problem;
    /// u(x, y, t); elliptic cases ignore t.
    std::function<double(double, double, double)> exact;
    bool parabolic = false;
};

/// MP1: u = exp(-t) sin(pi x) sin(pi y), mu = 0.1, sigma = 1, beta = (1, 0).
/// ME1: u = sin(pi x) sin(pi y), same coefficients.
/// ME0: zero forcing, u = 0, same coefficients.
ManufacturedCase manufactured_case(const std::string& id);

/// Strong-form residual u_t - mu Lap u + beta . grad u + sigma u - f of the
/// exact solution, evaluated with analytic derivatives.
double manufactured_residual(const ManufacturedCase& mc, double x, double y, double t);

/// Samples the exact solution at time t.
ScalarField sample_exact(const ManufacturedCase& mc, const Grid2D& grid, double t = 0.0);

enum class ReferenceMethod {
    /// Banded LU up to n = 128, CG on the normal equations beyond.
    Automatic,
    Direct,
    Iterative,
};

/// Unsplit theta-scheme on the full five-point operator:
///   (I + theta dt A_h) u_{j+1} = (I - (1-theta) dt A_h) u_j + dt f_h.
/// Each solve reaches a relative residual of 1e-12 or throws SolverBreakdown.
Trajectory reference_parabolic(const ProblemSpec& problem, const Grid2D& grid, double theta, double dt,
                               ReferenceMethod method = ReferenceMethod::Automatic);

/// Solves A_h u = f_h.
ScalarField reference_elliptic(const ProblemSpec& problem, const Grid2D& grid,
                               ReferenceMethod method = ReferenceMethod::Automatic);

} // namespace adrsplit
