#include "adrsplit/report.hpp"

#include <cmath>
#include <iomanip>
#include <limits>
#include <ostream>

namespace adrsplit {

using nlohmann::json;

json number_or_null(double value) { return std::isfinite(value) ? json(value) : json(nullptr); }

namespace {

json numbers(const std::vector<double>& values) {
    json out = json::array();
    for (double v : values) {
        out.push_back(number_or_null(v));
    }
    return out;
}

} // namespace

json to_json(const FieldReport& r) {
    return json{
        {"min_speed", number_or_null(r.min_speed)},
        {"max_speed", number_or_null(r.max_speed)},
        {"max_abs_div_beta", number_or_null(r.max_abs_div_beta)},
        {"min_div_b", number_or_null(r.min_div_b)},
        {"max_streamline_increase", number_or_null(r.max_streamline_increase)},
        {"closed_curve_detected", r.closed_curve_detected},
        {"mesh_peclet", number_or_null(r.mesh_peclet)},
        {"axis_aligned", r.axis_aligned},
        {"vanishing_speed", r.vanishing_speed},
        {"analytic_divergence", r.analytic_divergence},
        {"divergence_tolerance", r.divergence_tolerance},
        {"div_b_tolerance", r.div_b_tolerance},
        {"traces", r.traces},
        {"traces_exited", r.traces_exited},
        {"verdict", to_string(r.verdict)},
        {"diagnostics", r.diagnostics},
    };
}

json to_json(const NormEstimate& e) {
    return json{
        {"value", number_or_null(e.value)},
        {"iterations", e.iterations},
        {"converged", e.converged},
        {"residual", number_or_null(e.residual)},
    };
}

json to_json(const ConvergenceReport& r) {
    json out{
        {"dts", numbers(r.dts)},
        {"errors", numbers(r.errors)},
        {"observed_orders", numbers(r.observed_orders)},
        {"summary_order", number_or_null(r.summary_order)},
        {"order_defined", r.order_defined},
        {"notes", r.notes},
    };
    if (!r.final_time_errors.empty()) {
        out["final_time_errors"] = numbers(r.final_time_errors);
    }
    if (!r.converged.empty()) {
        out["converged"] = r.converged;
        out["iterations"] = r.iterations;
    }
    return out;
}

json to_json(const EnergyReport& r) {
    return json{
        {"per_step_ok", r.per_step_ok},
        {"norms", numbers(r.norms)},
        {"per_step_bound", numbers(r.per_step_bound)},
        {"global_bound_ok", r.global_bound_ok},
        {"global_bound", number_or_null(r.global_bound)},
        {"decay_factor", number_or_null(r.decay_factor)},
        {"worst_violation", number_or_null(r.worst_violation)},
        {"warnings", r.warnings},
    };
}

json to_json(const StationaryResult& r) {
    return json{
        {"iterations", r.iterations},
        {"converged", r.converged},
        {"final_update_norm", number_or_null(r.final_update_norm)},
        {"elliptic_residual", number_or_null(r.elliptic_residual)},
        {"solution_norm", number_or_null(discrete_l2_norm(r.solution))},
    };
}

void write_convergence_csv(std::ostream& out, const ConvergenceReport& r) {
    out << "dt,error,observed_order\n";
    out << std::setprecision(std::numeric_limits<double>::max_digits10);
    for (std::size_t k = 0; k < r.dts.size(); ++k) {
        out << r.dts[k] << ',' << r.errors[k] << ',';
        if (k > 0 && std::isfinite(r.observed_orders[k - 1])) {
            out << r.observed_orders[k - 1];
        }
        out << '\n';
    }
}

void write_trajectory_csv(std::ostream& out, const Trajectory& traj) {
    out << "j,t,norm_u\n";
    out << std::setprecision(std::numeric_limits<double>::max_digits10);
    for (int j = 0; j <= traj.step_count; ++j) {
        out << j << ',' << traj.time(j) << ',' << discrete_l2_norm(traj.states[j]) << '\n';
    }
}

} // namespace adrsplit
