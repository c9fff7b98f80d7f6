#include "adrsplit/analysis.hpp"

#include "adrsplit/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace adrsplit {

namespace {

constexpr double kEnergySlack = 1e-10;

void fill_orders(ConvergenceReport& report) {
    const std::size_t m = report.dts.size();
    const bool positive = std::all_of(report.errors.begin(), report.errors.end(),
                                      [](double e) { return e > 0.0 && std::isfinite(e); });
    report.observed_orders.assign(m > 0 ? m - 1 : 0, std::numeric_limits<double>::quiet_NaN());
    if (positive) {
        for (std::size_t k = 0; k + 1 < m; ++k) {
            report.observed_orders[k] = std::log(report.errors[k] / report.errors[k + 1]) /
                                        std::log(report.dts[k] / report.dts[k + 1]);
        }
    }
    if (positive && m >= 2) {
        report.summary_order = observed_order(report.errors, report.dts);
        report.order_defined = true;
    } else {
        report.summary_order = std::numeric_limits<double>::quiet_NaN();
        report.order_defined = false;
        report.notes.push_back("observed order undefined: errors must be positive with at least two entries");
    }
}

void require_decreasing(std::span<const double> dts) {
    if (dts.empty()) {
        throw InvalidArgument("study needs at least one time step");
    }
    for (std::size_t k = 0; k < dts.size(); ++k) {
        if (!(dts[k] > 0.0)) {
            throw InvalidArgument("time steps must be positive");
        }
        if (k > 0 && !(dts[k] < dts[k - 1])) {
            throw InvalidArgument("time steps must be strictly decreasing");
        }
    }
}

} // namespace

bool EnergyReport::all_ok() const {
    return global_bound_ok && std::all_of(per_step_ok.begin(), per_step_ok.end(), [](bool b) { return b; });
}

double observed_order(std::span<const double> errors, std::span<const double> dts) {
    if (errors.size() != dts.size() || errors.size() < 2) {
        throw InvalidArgument("observed order needs at least two (dt, error) pairs");
    }
    double sx = 0.0;
    double sy = 0.0;
    for (std::size_t k = 0; k < errors.size(); ++k) {
        if (!(errors[k] > 0.0) || !(dts[k] > 0.0)) {
            throw InvalidArgument("observed order needs positive errors and time steps");
        }
        sx += std::log(dts[k]);
        sy += std::log(errors[k]);
    }
    const double m = static_cast<double>(errors.size());
    const double mx = sx / m;
    const double my = sy / m;
    double sxy = 0.0;
    double sxx = 0.0;
    for (std::size_t k = 0; k < errors.size(); ++k) {
        const double dx = std::log(dts[k]) - mx;
        sxy += dx * (std::log(errors[k]) - my);
        sxx += dx * dx;
    }
    if (sxx == 0.0) {
        throw InvalidArgument("observed order needs distinct time steps");
    }
    return sxy / sxx;
}

ConvergenceReport parabolic_convergence_study(const ManufacturedCase& mc, const Grid2D& grid, double theta,
                                              std::span<const double> dts, const ParabolicOptions& options,
                                              std::vector<ScalarField>* final_states) {
    require_decreasing(dts);
    if (!(theta >= 0.5)) {
        throw InvalidArgument("parabolic study needs theta >= 1/2");
    }
    for (double dt : dts) {
        const double steps = mc.problem.horizon / dt;
        if (std::abs(steps - std::round(steps)) > 1e-9 * std::max(1.0, steps)) {
            throw InvalidArgument("every time step must divide the horizon exactly");
        }
    }

    ConvergenceReport report;
    for (double dt : dts) {
        const Trajectory traj = solve_parabolic(mc.problem, grid, theta, dt, options);
        double sum = 0.0;
        double final_error = 0.0;
        for (int j = 0; j <= traj.step_count; ++j) {
            const double e = discrete_l2_norm(traj.states[j] - sample_exact(mc, grid, traj.time(j)));
            sum += e * e;
            final_error = e;
        }
        report.dts.push_back(dt);
        report.errors.push_back(std::sqrt(dt * sum));
        report.final_time_errors.push_back(final_error);
        if (final_states) {
            final_states->push_back(traj.states.back());
        }
    }
    fill_orders(report);
    return report;
}

ConvergenceReport stationary_residual_study(const ManufacturedCase& mc, const Grid2D& grid, double theta,
                                            std::span<const double> dts, double tol, int max_iter,
                                            std::vector<ScalarField>* solutions) {
    require_decreasing(dts);
    if (!(theta > 0.5)) {
        throw InvalidArgument("stationary study needs theta > 1/2 strictly");
    }
    ConvergenceReport report;
    for (double dt : dts) {
        const StationaryResult result = solve_stationary(mc.problem, grid, theta, dt, tol, max_iter);
        report.dts.push_back(dt);
        report.errors.push_back(result.elliptic_residual);
        report.converged.push_back(result.converged);
        report.iterations.push_back(result.iterations);
        if (!result.converged) {
            report.notes.push_back("dt = " + std::to_string(dt) + " did not converge within " +
                                   std::to_string(max_iter) + " iterations");
        }
        if (solutions) {
            solutions->push_back(result.solution);
        }
    }
    fill_orders(report);
    return report;
}

EnergyReport energy_check(const Trajectory& traj, const ProblemSpec& problem) {
    if (traj.theta != 1.0) {
        throw InvalidArgument("energy bounds are derived for the fully implicit scheme (theta = 1)");
    }
    if (traj.states.size() != static_cast<std::size_t>(traj.step_count) + 1 ||
        traj.source_norms.size() != static_cast<std::size_t>(traj.step_count)) {
        throw InvalidArgument("trajectory is incomplete");
    }
    problem.validate();

    EnergyReport report;
    report.decay_factor = 1.0 / (1.0 + problem.sigma * traj.dt);
    const double alpha = report.decay_factor;
    report.worst_violation = -std::numeric_limits<double>::infinity();

    for (const auto& u : traj.states) {
        report.norms.push_back(discrete_l2_norm(u));
    }
    for (int j = 0; j < traj.step_count; ++j) {
        const double bound = alpha * report.norms[j] + alpha * traj.dt * traj.source_norms[j];
        const double violation = report.norms[j + 1] - bound;
        report.per_step_bound.push_back(bound);
        report.per_step_ok.push_back(violation <= kEnergySlack);
        report.worst_violation = std::max(report.worst_violation, violation);
    }

    const double max_source =
        traj.source_norms.empty() ? 0.0 : *std::max_element(traj.source_norms.begin(), traj.source_norms.end());
    const double horizon = traj.step_count * traj.dt;
    report.global_bound = report.norms.front() + horizon * max_source;
    for (double norm_u : report.norms) {
        const double violation = norm_u - report.global_bound;
        report.worst_violation = std::max(report.worst_violation, violation);
        if (violation > kEnergySlack) {
            report.global_bound_ok = false;
        }
    }

    if (!report.all_ok()) {
        const FieldReport field = validate_advection(problem.advection, traj.states.front().grid(), problem.mu);
        if (field.max_streamline_increase > field.div_b_tolerance) {
            report.warnings.push_back(
                "advection speed increases along streamlines; the energy bound assumes it does not");
        }
    }
    return report;
}

} // namespace adrsplit
