// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// non-zero if any fails.

#include "adrsplit/advection.hpp"
#include "adrsplit/analysis.hpp"
#include "adrsplit/cli.hpp"
#include "adrsplit/expressions.hpp"
#include "adrsplit/operators.hpp"
#include "adrsplit/oracle.hpp"
#include "adrsplit/parallel.hpp"
#include "adrsplit/splitting.hpp"

#include "dense_oracle.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

using namespace adrsplit;
namespace fs = std::filesystem;
namespace dense = adrsplit::testing;

namespace {

struct Outcome {
    bool passed = false;
    std::string detail;
};

int failures = 0;

void criterion(int id, const char* title, double budget_s, const std::function<Outcome()>& body) {
    const auto start = std::chrono::steady_clock::now();
    Outcome out;
    try {
        out = body();
    } catch (const std::exception& e) {
        out = {false, std::string("exception: ") + e.what()};
    }
    const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool in_time = elapsed < budget_s;
    const bool ok = out.passed && in_time;
    if (!ok) ++failures;
    std::printf("[%s] %d %s: %s; runtime %.2f s (limit %.0f s)%s\n", ok ? "PASS" : "FAIL", id, title,
                out.detail.c_str(), elapsed, budget_s, in_time ? "" : " EXCEEDED");
    std::fflush(stdout);
}

std::string fmt(const char* pattern, double a, double b = 0.0, double c = 0.0) {
    char buf[256];
    std::snprintf(buf, sizeof buf, pattern, a, b, c);
    return buf;
}

ProblemSpec sweep_problem() {
    ProblemSpec p;
    p.mu = 0.1;
    p.sigma = 1.0;
    p.advection = make_advection("constant-x(1)");
    p.source = [](double, double, double) { return 0.0; };
    p.initial = [](double, double) { return 0.0; };
    return p;
}

Outcome norm_dichotomy() {
    const ProblemSpec p = sweep_problem();
    bool ok = true;
    double worst_strict = 0.0;
    double at_half = 0.0;
    double svd_gap = 0.0;
    for (const double theta : {0.5, 0.6, 0.75, 1.0}) {
        for (const double dt : {0.02, 0.1, 0.5}) {
            const auto ops = assemble_split_operators(p, Grid2D(16), theta, dt);
            const NormEstimate e = estimate_operator_norm(ops);
            ok = ok && e.converged;
            if (theta > 0.5) {
                worst_strict = std::max(worst_strict, e.value);
                ok = ok && e.value < 1.0;
            } else {
                at_half = std::max(at_half, e.value);
                ok = ok && e.value <= 1.0 + 1e-8;
            }

            const Grid2D small(8);
            const double power = estimate_operator_norm(assemble_split_operators(p, small, theta, dt)).value;
            const Eigen::JacobiSVD<Eigen::MatrixXd> svd(dense::dense_T(p, small, theta, dt));
            svd_gap = std::max(svd_gap, std::abs(power - svd.singularValues()(0)));
        }
    }
    ok = ok && svd_gap <= 1e-6;
    return {ok, fmt("max ||T|| over theta>1/2 = %.6f (< 1), max ||T|| at theta=1/2 = %.6f (<= 1+1e-8), "
                    "max |power - SVD| on n=8 = %.2e (<= 1e-6)",
                    worst_strict, at_half, svd_gap)};
}

Outcome energy_chain() {
    const ManufacturedCase mc = manufactured_case("MP1");
    const Trajectory traj = solve_parabolic(mc.problem, Grid2D(32), 1.0, 1.0 / 32.0);
    const EnergyReport r = energy_check(traj, mc.problem);
    const auto held = std::count(r.per_step_ok.begin(), r.per_step_ok.end(), true);
    const bool ok = r.per_step_ok.size() == 32 && r.all_ok();
    return {ok, fmt("per-step bound held at %.0f/%.0f steps (worst lhs-rhs %.3e), global bound ",
                    static_cast<double>(held), static_cast<double>(r.per_step_ok.size()), r.worst_violation) +
                    (r.global_bound_ok ? "held" : "violated")};
}

Outcome stationary_bound() {
    const ManufacturedCase mc = manufactured_case("ME1");
    const Grid2D grid(32);
    const StationaryResult r = solve_stationary(mc.problem, grid, 0.75, 0.1, 1e-10, 2000);
    const double norm_u = discrete_l2_norm(r.solution);
    const double bound = discrete_l2_norm(sample_source(mc.problem, grid)) / mc.problem.sigma + 1e-8;
    const bool ok = r.converged && r.final_update_norm <= 1e-10 && r.iterations <= 2000 && norm_u <= bound;
    return {ok, fmt("converged=%.0f after %.0f iterations (update %.2e)", r.converged ? 1.0 : 0.0, r.iterations,
                    r.final_update_norm) +
                    fmt(", ||u|| = %.6f <= ||f||/sigma + 1e-8 = %.6f", norm_u, bound)};
}

std::vector<double> parabolic_dts() { return {1.0 / 8, 1.0 / 16, 1.0 / 32, 1.0 / 64}; }

Outcome parabolic_order() {
    ManufacturedCase mc = manufactured_case("MP1");
    mc.problem.horizon = 0.5;
    const auto dts = parabolic_dts();
    const ConvergenceReport r = parabolic_convergence_study(mc, Grid2D(128), 1.0, dts);
    bool decreasing = true;
    std::string errors;
    for (std::size_t k = 0; k < r.errors.size(); ++k) {
        errors += fmt(k ? ", %.4e" : "%.4e", r.errors[k]);
        if (k > 0) decreasing = decreasing && r.errors[k] < r.errors[k - 1];
    }
    const bool ok = decreasing && r.order_defined && r.summary_order >= 0.9;
    return {ok, "errors [" + errors + "]" + (decreasing ? " strictly decreasing" : " NOT decreasing") +
                    fmt(", summary order %.4f (>= 0.9)", r.summary_order)};
}

Outcome stationary_order() {
    const std::vector<double> dts{0.2, 0.1, 0.05};
    const ConvergenceReport r = stationary_residual_study(manufactured_case("ME1"), Grid2D(64), 0.75, dts, 1e-10);
    bool decreasing = true;
    bool converged = true;
    std::string errors;
    for (std::size_t k = 0; k < r.errors.size(); ++k) {
        errors += fmt(k ? ", %.4e" : "%.4e", r.errors[k]);
        if (k > 0) decreasing = decreasing && r.errors[k] < r.errors[k - 1];
        converged = converged && r.converged[k];
    }
    const bool ok = converged && decreasing && r.order_defined && r.summary_order >= 0.7 && r.summary_order <= 1.3;
    return {ok, "residuals [" + errors + "]" + (decreasing ? " decreasing" : " NOT decreasing") +
                    fmt(", summary order %.4f (in [0.7, 1.3])", r.summary_order)};
}

Outcome streamline_monotonicity() {
    const Grid2D grid(32);
    const double mu = 0.1;
    int checked = 0;
    bool ok = true;
    double worst = 0.0;
    for (const char* name : {"constant-x(1)", "constant-x(3)", "constant(1, 0.5)", "shear(1, 0.5)",
                             "decelerating(1)"}) {
        const FieldReport r = validate_advection(make_advection(name), grid, mu);
        if (r.max_abs_div_beta > r.divergence_tolerance || r.min_div_b < -r.div_b_tolerance) continue;
        ++checked;
        worst = std::max(worst, r.max_streamline_increase - r.div_b_tolerance);
        ok = ok && r.max_streamline_increase <= r.div_b_tolerance && !r.closed_curve_detected;
    }
    const FieldReport rotation = validate_advection(make_advection("rotation(1)"), grid, mu);
    const FieldReport corner = validate_advection(make_advection("corner-rotation(1)"), grid, mu);
    ok = ok && checked >= 3 && rotation.closed_curve_detected && rotation.verdict == Verdict::Fail;
    return {ok, fmt("%.0f qualifying fields, max (increase - tol) = %.2e (<= 0); ", checked, worst) +
                    "rotation about the square centre: closed_curve_detected=" +
                    (rotation.closed_curve_detected ? "true" : "false") + ", verdict " + to_string(rotation.verdict) +
                    "; literal (y,-x) about the origin: closed_curve_detected=" +
                    (corner.closed_curve_detected ? "true" : "false") + " (orbits leave the unit square)"};
}

Outcome oracle_equivalence() {
    const Grid2D grid(8);
    ProblemSpec p = sweep_problem();
    p.advection = make_advection("shear(1, 0.5)");
    p.source = [](double x, double y, double) { return std::exp(x) * std::cos(2.0 * y) + x * y; };
    const double theta = 0.7;
    const double dt = 0.1;
    const auto ops = assemble_split_operators(p, grid, theta, dt);

    const Eigen::MatrixXd t = dense::dense_T(p, grid, theta, dt);
    const auto b_impl = dense::dense_streamwise(p, grid, theta * dt).partialPivLu();
    const Eigen::MatrixXd b_expl = dense::dense_streamwise(p, grid, (theta - 1.0) * dt);
    const auto r_impl = dense::dense_cross_stream(p.mu, grid, theta * dt).partialPivLu();
    const Eigen::MatrixXd r_expl = dense::dense_cross_stream(p.mu, grid, (theta - 1.0) * dt);
    const auto s = dense::dense_streamwise(p, grid, 1.0, 0.0).partialPivLu();

    std::mt19937_64 rng(2024);
    double gap_t = 0.0;
    double gap_adv = 0.0;
    double gap_diff = 0.0;
    double gap_guess = 0.0;
    for (int trial = 0; trial < 10; ++trial) {
        const ScalarField u = dense::random_field(grid, rng);
        const ScalarField f = dense::random_field(grid, rng);
        const Eigen::VectorXd uv = dense::to_vector(u);
        const Eigen::VectorXd fv = dense::to_vector(f);
        gap_t = std::max(gap_t, max_abs_difference(apply_T(ops, u), dense::to_field(grid, t * uv)));
        gap_adv = std::max(gap_adv, max_abs_difference(advection_substep(u, ops, f),
                                                       dense::to_field(grid, b_impl.solve(b_expl * uv + dt * fv))));
        gap_diff = std::max(gap_diff,
                            max_abs_difference(diffusion_substep(u, ops), dense::to_field(grid, r_impl.solve(r_expl * uv))));

        // Random source for the initial guess: the field values serve as f_h.
        ProblemSpec q = p;
        const std::vector<double> values = f.values();
        q.source = [values, grid](double x, double y, double) {
            const int ix = static_cast<int>(std::lround(x / grid.h())) - 1;
            const int iy = static_cast<int>(std::lround(y / grid.h())) - 1;
            return values[static_cast<std::size_t>(iy) * grid.n() + ix];
        };
        gap_guess = std::max(gap_guess,
                             max_abs_difference(initial_guess_stationary(q, grid), dense::to_field(grid, s.solve(fv))));
    }
    const double worst = std::max({gap_t, gap_adv, gap_diff, gap_guess});
    return {worst <= 1e-10, fmt("max |diff| apply_T %.2e, advection_substep %.2e, diffusion_substep %.2e", gap_t,
                                gap_adv, gap_diff) +
                                fmt(", initial_guess_stationary %.2e (all <= 1e-10)", gap_guess)};
}

std::string read_text(const fs::path& path) {
    std::ifstream in(path);
    std::stringstream s;
    s << in.rdbuf();
    return s.str();
}

int run_cli(const fs::path& config, const fs::path& out, int threads) {
    std::vector<std::string> args{"adr-split",    config.string(), "--output-dir", out.string(),
                                  "--threads", std::to_string(threads)};
    std::vector<char*> argv;
    for (auto& a : args) argv.push_back(a.data());
    return cli::main(static_cast<int>(argv.size()), argv.data());
}

Outcome thread_determinism() {
    const fs::path root = fs::temp_directory_path() / "adrsplit-acceptance";
    fs::remove_all(root);
    fs::create_directories(root);
    const fs::path config = root / "study.json";
    {
        nlohmann::json cfg{{"command", "converge-parabolic"},
                           {"problem", {{"case", "MP1"}, {"horizon", 0.5}}},
                           {"grid_n", 128},
                           {"theta", 1.0},
                           {"dt_list", parabolic_dts()}};
        std::ofstream(config) << cfg.dump(2) << '\n';
    }
    const int code1 = run_cli(config, root / "t1", 1);
    const int code8 = run_cli(config, root / "t8", 8);
    set_worker_count(1);

    auto a = nlohmann::json::parse(read_text(root / "t1" / "report.json"));
    auto b = nlohmann::json::parse(read_text(root / "t8" / "report.json"));
    a.erase("metadata");
    b.erase("metadata");
    const bool same_report = a == b;

    double gap = 0.0;
    int fields = 0;
    for (const auto& entry : fs::directory_iterator(root / "t1")) {
        const std::string name = entry.path().filename().string();
        if (name.rfind("field_", 0) != 0) continue;
        ++fields;
        gap = std::max(gap, max_abs_difference(read_field_csv(entry.path().string()),
                                               read_field_csv((root / "t8" / name).string())));
    }
    const bool ok = code1 == 0 && code8 == 0 && same_report && fields == 4 && gap <= 1e-13;
    return {ok, fmt("exit codes %.0f/%.0f, %.0f field dumps", code1, code8, fields) +
                    fmt(", max componentwise |diff| %.2e (<= 1e-13), report.json modulo metadata ", gap) +
                    (same_report ? "identical" : "DIFFERS")};
}

} // namespace

int main() {
    criterion(1, "norm dichotomy", 30.0, norm_dichotomy);
    criterion(2, "energy chain", 5.0, energy_chain);
    criterion(3, "stationary bound", 10.0, stationary_bound);
    criterion(4, "parabolic convergence order", 120.0, parabolic_order);
    criterion(5, "stationary residual order", 60.0, stationary_order);
    criterion(6, "streamline speed monotonicity", 10.0, streamline_monotonicity);
    criterion(7, "dense oracle equivalence", 5.0, oracle_equivalence);
    criterion(8, "thread-count determinism", 60.0, thread_determinism);
    std::printf("%d of 8 criteria failed\n", failures);
    return failures == 0 ? 0 : 1;
}
