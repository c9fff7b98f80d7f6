#pragma once

#include "adrsplit/advection.hpp"
#include "adrsplit/grid.hpp"

#include <functional>

namespace adrsplit {

using SpaceFunction = std::function<double(double, double)>;
using SpaceTimeFunction = std::function<double(double, double, double)>;

/// Coefficients and data of  u_t - mu Lap(u) + beta . grad(u) + sigma u = f
/// on the unit square with homogeneous Dirichlet data.
struct ProblemSpec {
    double mu = 1.0;
    double sigma = 1.0;
    AdvectionField advection;
    /// f(x, y, t). Stationary problems evaluate it at t = 0.
    SpaceTimeFunction source;
    /// Whether source depends on t; otherwise it is sampled once per run.
    bool source_time_dependent = false;
    SpaceFunction initial;
    /// Final time T of parabolic runs.
    double horizon = 1.0;

    /// Throws InvalidArgument unless mu, sigma, horizon are positive and
    /// every function is set.
    void validate() const;
};

ScalarField sample_source(const ProblemSpec& problem, const Grid2D& grid, double t = 0.0);
ScalarField sample_initial(const ProblemSpec& problem, const Grid2D& grid);

} // namespace adrsplit
