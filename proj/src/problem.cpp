#include "adrsplit/problem.hpp"

#include "adrsplit/errors.hpp"

#include <cmath>

namespace adrsplit {

void ProblemSpec::validate() const {
    if (!(mu > 0.0) || !std::isfinite(mu)) {
        throw InvalidArgument("diffusion coefficient mu must be positive");
    }
    if (!(sigma > 0.0) || !std::isfinite(sigma)) {
        throw InvalidArgument("reaction coefficient sigma must be positive");
    }
    if (!(horizon > 0.0) || !std::isfinite(horizon)) {
        throw InvalidArgument("horizon must be positive");
    }
    if (!advection.beta) {
        throw InvalidArgument("problem has no advection field");
    }
    if (!source) {
        throw InvalidArgument("problem has no source term");
    }
    if (!initial) {
        throw InvalidArgument("problem has no initial state");
    }
}

ScalarField sample_source(const ProblemSpec& problem, const Grid2D& grid, double t) {
    const auto& f = problem.source;
    return sample(grid, [&](double x, double y) { return f(x, y, t); });
}

ScalarField sample_initial(const ProblemSpec& problem, const Grid2D& grid) {
    return sample(grid, problem.initial);
}

} // namespace adrsplit
