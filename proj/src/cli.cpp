#include "adrsplit/cli.hpp"

#include "adrsplit/analysis.hpp"
#include "adrsplit/errors.hpp"
#include "adrsplit/expressions.hpp"
#include "adrsplit/oracle.hpp"
#include "adrsplit/parallel.hpp"
#include "adrsplit/report.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <limits>
#include <set>
#include <sstream>

namespace adrsplit::cli {

using nlohmann::json;

namespace {

constexpr const char* kSchema = "adr-split/1";

const std::vector<std::pair<Command, std::string>>& command_names() {
    static const std::vector<std::pair<Command, std::string>> names{
        {Command::ValidateField, "validate-field"},
        {Command::SolveParabolic, "solve-parabolic"},
        {Command::SolveStationary, "solve-stationary"},
        {Command::ConvergeParabolic, "converge-parabolic"},
        {Command::ConvergeStationary, "converge-stationary"},
        {Command::NormProbe, "norm-probe"},
        {Command::EnergyAudit, "energy-audit"},
    };
    return names;
}

int line_of_offset(const std::string& text, std::size_t offset) {
    offset = std::min(offset, text.size());
    return 1 + static_cast<int>(std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(offset), '\n'));
}

// First line mentioning "key"; 1 when absent.
int line_of_key(const std::string& text, const std::string& key) {
    const auto pos = text.find('"' + key + '"');
    return pos == std::string::npos ? 1 : line_of_offset(text, pos);
}

class ConfigReader {
public:
    explicit ConfigReader(const std::string& text) : text_(text) {}

    [[noreturn]] void fail(const std::string& key, const std::string& message) const {
        throw ConfigError(line_of_key(text_, key), message);
    }

    void reject_unknown(const json& object, const std::set<std::string>& known, const std::string& where) const {
        for (const auto& [key, value] : object.items()) {
            if (!known.contains(key)) {
                fail(key, "unknown key '" + key + "' in " + where);
            }
        }
    }

    double number(const json& object, const std::string& key) const {
        const json& v = object.at(key);
        if (!v.is_number()) {
            fail(key, "'" + key + "' must be a number");
        }
        const double value = v.get<double>();
        if (!std::isfinite(value)) {
            fail(key, "'" + key + "' must be finite");
        }
        return value;
    }

    int integer(const json& object, const std::string& key) const {
        const json& v = object.at(key);
        if (!v.is_number_integer()) {
            fail(key, "'" + key + "' must be an integer");
        }
        return v.get<int>();
    }

    std::string string(const json& object, const std::string& key) const {
        const json& v = object.at(key);
        if (!v.is_string()) {
            fail(key, "'" + key + "' must be a string");
        }
        return v.get<std::string>();
    }

    bool boolean(const json& object, const std::string& key) const {
        const json& v = object.at(key);
        if (!v.is_boolean()) {
            fail(key, "'" + key + "' must be true or false");
        }
        return v.get<bool>();
    }

private:
    const std::string& text_;
};

bool is_parabolic(Command c) {
    return c == Command::SolveParabolic || c == Command::ConvergeParabolic || c == Command::EnergyAudit;
}

bool is_stationary(Command c) { return c == Command::SolveStationary || c == Command::ConvergeStationary; }

} // namespace

std::string to_string(Command command) {
    for (const auto& [c, name] : command_names()) {
        if (c == command) {
            return name;
        }
    }
    return "unknown";
}

RunConfig parse_config(const std::string& text) {
    json root;
    try {
        root = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError(line_of_offset(text, e.byte > 0 ? e.byte - 1 : 0), std::string("malformed JSON: ") + e.what());
    }
    if (!root.is_object()) {
        throw ConfigError(1, "config must be a JSON object");
    }
    const ConfigReader read(text);
    read.reject_unknown(root,
                        {"command", "problem", "grid_n", "theta", "dt", "dt_list", "tol", "max_iter", "seed",
                         "output_dir", "double_time_axis", "dump_fields", "min_order", "order_band"},
                        "config");

    RunConfig config;
    if (!root.contains("command")) {
        throw ConfigError(1, "missing required key 'command'");
    }
    const std::string command = read.string(root, "command");
    const auto& names = command_names();
    const auto it = std::find_if(names.begin(), names.end(), [&](const auto& p) { return p.second == command; });
    if (it == names.end()) {
        read.fail("command", "unknown command '" + command + "'");
    }
    config.command = it->first;

    if (!root.contains("problem")) {
        throw ConfigError(1, "missing required key 'problem'");
    }
    const json& problem = root.at("problem");
    if (!problem.is_object()) {
        read.fail("problem", "'problem' must be an object");
    }
    read.reject_unknown(problem, {"case", "mu", "sigma", "advection", "source", "initial", "horizon"}, "problem");
    if (problem.contains("case")) {
        config.problem.case_id = read.string(problem, "case");
        for (const char* key : {"mu", "sigma", "advection", "source", "initial"}) {
            if (problem.contains(key)) {
                read.fail(key, std::string("'") + key + "' cannot be combined with a manufactured 'case'");
            }
        }
        try {
            (void)manufactured_case(*config.problem.case_id);
        } catch (const InvalidArgument& e) {
            read.fail("case", e.what());
        }
    } else {
        if (problem.contains("mu")) {
            config.problem.mu = read.number(problem, "mu");
        }
        if (problem.contains("sigma")) {
            config.problem.sigma = read.number(problem, "sigma");
        }
        if (problem.contains("advection")) {
            config.problem.advection = read.string(problem, "advection");
        }
        if (problem.contains("source")) {
            config.problem.source = read.string(problem, "source");
        }
        if (problem.contains("initial")) {
            config.problem.initial = read.string(problem, "initial");
        }
        if (!(config.problem.mu > 0.0)) {
            read.fail("mu", "'mu' must be positive");
        }
        if (!(config.problem.sigma > 0.0)) {
            read.fail("sigma", "'sigma' must be positive");
        }
        try {
            (void)make_advection(config.problem.advection);
        } catch (const InvalidArgument& e) {
            read.fail("advection", e.what());
        }
        try {
            (void)make_scalar(config.problem.source);
        } catch (const InvalidArgument& e) {
            read.fail("source", e.what());
        }
        try {
            (void)make_scalar(config.problem.initial);
        } catch (const InvalidArgument& e) {
            read.fail("initial", e.what());
        }
    }
    if (problem.contains("horizon")) {
        config.problem.horizon = read.number(problem, "horizon");
        if (!(*config.problem.horizon > 0.0)) {
            read.fail("horizon", "'horizon' must be positive");
        }
    }

    if (!root.contains("grid_n")) {
        throw ConfigError(1, "missing required key 'grid_n'");
    }
    config.grid_n = read.integer(root, "grid_n");
    if (config.grid_n < 2) {
        read.fail("grid_n", "'grid_n' must be at least 2");
    }

    if (root.contains("theta")) {
        config.theta = read.number(root, "theta");
    } else if (config.command != Command::ValidateField && config.command != Command::EnergyAudit) {
        throw ConfigError(1, "missing required key 'theta'");
    }
    if (config.command != Command::ValidateField) {
        if (!(config.theta > 0.0 && config.theta <= 1.0)) {
            read.fail("theta", "'theta' must lie in (0, 1]");
        }
        if (is_parabolic(config.command) && config.theta < 0.5) {
            read.fail("theta", "parabolic runs require theta >= 1/2");
        }
        if (is_stationary(config.command) && !(config.theta > 0.5)) {
            read.fail("theta", "the stationary iteration requires theta > 1/2 strictly; at theta = 1/2 the "
                               "one-step operator norm is only bounded by 1, so the iteration need not contract");
        }
        if (config.command == Command::EnergyAudit && config.theta != 1.0) {
            read.fail("theta", "energy-audit checks bounds derived for the fully implicit scheme; theta must be 1");
        }
    }

    if (root.contains("dt") && root.contains("dt_list")) {
        read.fail("dt_list", "give either 'dt' or 'dt_list', not both");
    }
    if (root.contains("dt")) {
        config.dts = {read.number(root, "dt")};
    } else if (root.contains("dt_list")) {
        const json& list = root.at("dt_list");
        if (!list.is_array() || list.empty()) {
            read.fail("dt_list", "'dt_list' must be a non-empty array of numbers");
        }
        for (const json& v : list) {
            if (!v.is_number()) {
                read.fail("dt_list", "'dt_list' must contain numbers only");
            }
            config.dts.push_back(v.get<double>());
        }
    }
    for (double dt : config.dts) {
        if (!(dt > 0.0) || !std::isfinite(dt)) {
            read.fail(root.contains("dt") ? "dt" : "dt_list", "time steps must be positive");
        }
    }
    const bool study = config.command == Command::ConvergeParabolic || config.command == Command::ConvergeStationary;
    if (config.command != Command::ValidateField && config.dts.empty()) {
        throw ConfigError(1, "missing required key '" + std::string(study ? "dt_list" : "dt") + "'");
    }
    if (study) {
        if (config.dts.size() < 2) {
            read.fail("dt_list", "convergence studies need at least two time steps in 'dt_list'");
        }
        if (!config.problem.case_id) {
            read.fail("problem", "convergence studies need a manufactured 'case'");
        }
    } else if (config.dts.size() > 1 && config.command != Command::NormProbe) {
        read.fail("dt_list", "'" + to_string(config.command) + "' takes a single 'dt'");
    }

    if (root.contains("tol")) {
        config.tol = read.number(root, "tol");
        if (!(*config.tol > 0.0)) {
            read.fail("tol", "'tol' must be positive");
        }
    }
    if (root.contains("max_iter")) {
        config.max_iter = read.integer(root, "max_iter");
        if (*config.max_iter < 1) {
            read.fail("max_iter", "'max_iter' must be at least 1");
        }
    }
    if (root.contains("seed")) {
        const json& v = root.at("seed");
        if (!v.is_number_unsigned()) {
            read.fail("seed", "'seed' must be a non-negative integer");
        }
        config.seed = v.get<std::uint64_t>();
    }
    if (root.contains("output_dir")) {
        config.output_dir = read.string(root, "output_dir");
    }
    if (root.contains("double_time_axis")) {
        config.double_time_axis = read.boolean(root, "double_time_axis");
    }
    if (root.contains("dump_fields")) {
        config.dump_fields = read.boolean(root, "dump_fields");
    }
    if (root.contains("min_order")) {
        config.min_order = read.number(root, "min_order");
    }
    if (root.contains("order_band")) {
        const json& band = root.at("order_band");
        if (!band.is_array() || band.size() != 2 || !band[0].is_number() || !band[1].is_number() ||
            !(band[0].get<double>() <= band[1].get<double>())) {
            read.fail("order_band", "'order_band' must be [low, high] with low <= high");
        }
        config.order_low = band[0].get<double>();
        config.order_high = band[1].get<double>();
    }
    return config;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError(1, "cannot open config file '" + path + "'");
    }
    std::stringstream buffer;
    buffer << in.rdbuf();
    return parse_config(buffer.str());
}

ProblemSpec build_problem(const ProblemConfig& config) {
    ProblemSpec problem;
    if (config.case_id) {
        problem = manufactured_case(*config.case_id).problem;
    } else {
        problem.mu = config.mu;
        problem.sigma = config.sigma;
        problem.advection = make_advection(config.advection);
        const SpaceFunction source = make_scalar(config.source);
        problem.source = [source](double x, double y, double) { return source(x, y); };
        problem.initial = make_scalar(config.initial);
    }
    if (config.horizon) {
        problem.horizon = *config.horizon;
    }
    return problem;
}

namespace {

struct Check {
    std::string name;
    std::string tag;
    std::string inequality;
    bool passed = true;
    double lhs = 0.0;
    double rhs = 0.0;
};

json to_json(const Check& c) {
    return json{{"name", c.name},       {"tag", c.tag},
                {"inequality", c.inequality}, {"passed", c.passed},
                {"lhs", number_or_null(c.lhs)}, {"rhs", number_or_null(c.rhs)}};
}

json config_echo(const RunConfig& config) {
    json problem;
    if (config.problem.case_id) {
        problem["case"] = *config.problem.case_id;
    } else {
        problem["mu"] = config.problem.mu;
        problem["sigma"] = config.problem.sigma;
        problem["advection"] = config.problem.advection;
        problem["source"] = config.problem.source;
        problem["initial"] = config.problem.initial;
    }
    if (config.problem.horizon) {
        problem["horizon"] = *config.problem.horizon;
    }
    json out{
        {"command", to_string(config.command)},
        {"problem", problem},
        {"grid_n", config.grid_n},
        {"theta", config.theta},
        {"dts", config.dts},
        {"seed", config.seed},
        {"double_time_axis", config.double_time_axis},
    };
    if (config.tol) {
        out["tol"] = *config.tol;
    }
    if (config.max_iter) {
        out["max_iter"] = *config.max_iter;
    }
    return out;
}

std::string timestamp() {
    const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm utc{};
    gmtime_r(&now, &utc);
    std::ostringstream ss;
    ss << std::put_time(&utc, "%Y-%m-%dT%H:%M:%SZ");
    return ss.str();
}

std::ofstream open_output(const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) {
        throw std::runtime_error("cannot write " + path.string());
    }
    out << std::setprecision(std::numeric_limits<double>::max_digits10);
    return out;
}

struct Outputs {
    json result;
    std::vector<Check> checks;
    std::string csv;
    std::vector<std::pair<std::string, ScalarField>> fields;
};

std::string csv_number(double v) {
    std::ostringstream ss;
    ss << std::setprecision(std::numeric_limits<double>::max_digits10) << v;
    return ss.str();
}

Outputs run_validate_field(const RunConfig& config, const ProblemSpec& problem, const Grid2D& grid) {
    const FieldReport report = validate_advection(problem.advection, grid, problem.mu, config.tol);
    Outputs out;
    out.result = to_json(report);
    out.checks.push_back({"closed streamlines", "streamline-closure",
                          "no closed integral curve of beta inside the closed domain",
                          !report.closed_curve_detected, report.closed_curve_detected ? 1.0 : 0.0, 0.0});
    out.checks.push_back({"nonvanishing speed", "nonzero-advection", "|beta| > tol at every node",
                          !report.vanishing_speed, report.min_speed, report.divergence_tolerance});
    out.checks.push_back({"incompressibility", "incompressibility", "max |div beta| <= tol",
                          report.max_abs_div_beta <= report.divergence_tolerance, report.max_abs_div_beta,
                          report.divergence_tolerance});
    out.checks.push_back({"normalized divergence", "normalized-divergence", "min div(beta/|beta|) >= -tol",
                          !(report.min_div_b < -report.div_b_tolerance), report.min_div_b,
                          -report.div_b_tolerance});
    std::ostringstream csv;
    csv << "metric,value\n";
    csv << "max_abs_div_beta," << csv_number(report.max_abs_div_beta) << '\n';
    csv << "min_div_b," << csv_number(report.min_div_b) << '\n';
    csv << "max_streamline_increase," << csv_number(report.max_streamline_increase) << '\n';
    csv << "closed_curve_detected," << (report.closed_curve_detected ? 1 : 0) << '\n';
    csv << "mesh_peclet," << csv_number(report.mesh_peclet) << '\n';
    csv << "axis_aligned," << (report.axis_aligned ? 1 : 0) << '\n';
    csv << "verdict," << to_string(report.verdict) << '\n';
    out.csv = csv.str();
    return out;
}

Outputs run_solve_parabolic(const RunConfig& config, const ProblemSpec& problem, const Grid2D& grid) {
    ParabolicOptions options;
    options.double_time_axis = config.double_time_axis;
    const Trajectory traj = solve_parabolic(problem, grid, config.theta, config.dts.front(), options);
    Outputs out;
    const bool finite = std::all_of(traj.states.begin(), traj.states.end(),
                                    [](const ScalarField& u) { return u.all_finite(); });
    out.result = json{{"step_count", traj.step_count},
                      {"final_time", traj.time(traj.step_count)},
                      {"initial_norm", discrete_l2_norm(traj.states.front())},
                      {"final_norm", number_or_null(discrete_l2_norm(traj.states.back()))}};
    out.checks.push_back({"finite states", "finite-solution", "all nodal values finite", finite, 0.0, 0.0});
    std::ostringstream csv;
    write_trajectory_csv(csv, traj);
    out.csv = csv.str();
    out.fields.emplace_back("field_final.csv", traj.states.back());
    return out;
}

Outputs run_solve_stationary(const RunConfig& config, const ProblemSpec& problem, const Grid2D& grid) {
    const double tol = config.tol.value_or(1e-10);
    const StationaryResult result =
        solve_stationary(problem, grid, config.theta, config.dts.front(), tol, config.max_iter.value_or(2000));
    Outputs out;
    out.result = to_json(result);
    const double norm_u = discrete_l2_norm(result.solution);
    const double norm_f = discrete_l2_norm(sample_source(problem, grid, 0.0));
    out.checks.push_back({"fixed-point convergence", "stationary-convergence", "||u_{j+1} - u_j|| <= tol",
                          result.converged, result.final_update_norm, tol});
    out.checks.push_back({"stationary bound", "stationary-energy-bound", "||u|| <= ||f|| / sigma + tol",
                          norm_u <= norm_f / problem.sigma + tol, norm_u, norm_f / problem.sigma + tol});
    std::ostringstream csv;
    csv << "iterations,converged,final_update_norm,elliptic_residual,norm_u\n";
    csv << result.iterations << ',' << (result.converged ? 1 : 0) << ',' << csv_number(result.final_update_norm)
        << ',' << csv_number(result.elliptic_residual) << ',' << csv_number(norm_u) << '\n';
    out.csv = csv.str();
    out.fields.emplace_back("field_solution.csv", result.solution);
    return out;
}

void add_monotone_check(Outputs& out, const ConvergenceReport& report, const std::string& what) {
    double worst_ratio = 0.0;
    bool decreasing = true;
    for (std::size_t k = 1; k < report.errors.size(); ++k) {
        const double ratio = report.errors[k - 1] > 0.0 ? report.errors[k] / report.errors[k - 1]
                                                         : std::numeric_limits<double>::infinity();
        worst_ratio = std::max(worst_ratio, ratio);
        decreasing = decreasing && report.errors[k] < report.errors[k - 1];
    }
    out.checks.push_back({what + " decrease", "monotone-errors", "e(dt_{k+1}) < e(dt_k) for every k", decreasing,
                          worst_ratio, 1.0});
}

Outputs run_converge_parabolic(const RunConfig& config, const Grid2D& grid) {
    ManufacturedCase mc = manufactured_case(*config.problem.case_id);
    if (!mc.parabolic) {
        throw InvalidArgument("converge-parabolic needs a parabolic manufactured case (MP1)");
    }
    if (config.problem.horizon) {
        mc.problem.horizon = *config.problem.horizon;
    }
    ParabolicOptions options;
    options.double_time_axis = config.double_time_axis;
    std::vector<ScalarField> finals;
    const ConvergenceReport report =
        parabolic_convergence_study(mc, grid, config.theta, config.dts, options, &finals);
    Outputs out;
    out.result = to_json(report);
    add_monotone_check(out, report, "time-weighted errors");
    out.checks.push_back({"first-order convergence", "convergence-order", "summary_order >= min_order",
                          report.order_defined && report.summary_order >= config.min_order, report.summary_order,
                          config.min_order});
    std::ostringstream csv;
    write_convergence_csv(csv, report);
    out.csv = csv.str();
    for (std::size_t k = 0; k < finals.size(); ++k) {
        out.fields.emplace_back("field_dt" + std::to_string(k) + ".csv", finals[k]);
    }
    return out;
}

Outputs run_converge_stationary(const RunConfig& config, const Grid2D& grid) {
    const ManufacturedCase mc = manufactured_case(*config.problem.case_id);
    const double tol = config.tol.value_or(1e-10);
    std::vector<ScalarField> solutions;
    const ConvergenceReport report = stationary_residual_study(mc, grid, config.theta, config.dts, tol,
                                                               config.max_iter.value_or(20000), &solutions);
    Outputs out;
    out.result = to_json(report);
    const bool all_converged = std::all_of(report.converged.begin(), report.converged.end(), [](bool b) { return b; });
    out.checks.push_back({"fixed-point convergence", "stationary-convergence",
                          "||u_{j+1} - u_j|| <= tol for every dt", all_converged, 0.0, tol});
    add_monotone_check(out, report, "elliptic residuals");
    const bool in_band = report.order_defined && report.summary_order >= config.order_low &&
                         report.summary_order <= config.order_high;
    out.checks.push_back({"residual O(dt)", "residual-order", "order_low <= summary_order <= order_high", in_band,
                          report.summary_order, config.order_low});
    std::ostringstream csv;
    write_convergence_csv(csv, report);
    out.csv = csv.str();
    for (std::size_t k = 0; k < solutions.size(); ++k) {
        out.fields.emplace_back("field_dt" + std::to_string(k) + ".csv", solutions[k]);
    }
    return out;
}

Outputs run_norm_probe(const RunConfig& config, const ProblemSpec& problem, const Grid2D& grid) {
    const double tol = config.tol.value_or(1e-10);
    const int max_iter = config.max_iter.value_or(10000);
    Outputs out;
    out.result = json::array();
    std::ostringstream csv;
    csv << "theta,dt,norm,iterations,converged,residual\n";
    for (double dt : config.dts) {
        const SplitOperators ops = assemble_split_operators(problem, grid, config.theta, dt);
        const NormEstimate estimate = estimate_operator_norm(ops, tol, max_iter, config.seed);
        json entry = to_json(estimate);
        entry["dt"] = dt;
        entry["theta"] = config.theta;
        out.result.push_back(entry);
        csv << csv_number(config.theta) << ',' << csv_number(dt) << ',' << csv_number(estimate.value) << ','
            << estimate.iterations << ',' << (estimate.converged ? 1 : 0) << ',' << csv_number(estimate.residual)
            << '\n';
        if (config.theta > 0.5) {
            out.checks.push_back({"contraction at dt=" + csv_number(dt), "stability-dichotomy",
                                  "||T|| < 1 for theta > 1/2", estimate.value < 1.0, estimate.value, 1.0});
        } else if (config.theta == 0.5) {
            out.checks.push_back({"boundedness at dt=" + csv_number(dt), "stability-dichotomy",
                                  "||T|| <= 1 + 1e-8 for theta = 1/2", estimate.value <= 1.0 + 1e-8,
                                  estimate.value, 1.0 + 1e-8});
        }
    }
    out.csv = csv.str();
    return out;
}

Outputs run_energy_audit(const RunConfig& config, const ProblemSpec& problem, const Grid2D& grid) {
    const Trajectory traj = solve_parabolic(problem, grid, config.theta, config.dts.front());
    const EnergyReport report = energy_check(traj, problem);
    Outputs out;
    out.result = to_json(report);
    double per_step_worst = -std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < report.per_step_bound.size(); ++j) {
        per_step_worst = std::max(per_step_worst, report.norms[j + 1] - report.per_step_bound[j]);
    }
    const bool per_step_ok =
        std::all_of(report.per_step_ok.begin(), report.per_step_ok.end(), [](bool b) { return b; });
    out.checks.push_back({"per-step energy bound", "energy-per-step",
                          "||u_{j+1}|| <= a ||u_j|| + a dt ||f||, a = 1/(1 + sigma dt)", per_step_ok,
                          per_step_worst, 1e-10});
    const double max_norm = *std::max_element(report.norms.begin(), report.norms.end());
    out.checks.push_back({"global energy bound", "energy-global", "||u_j|| <= ||u_0|| + T ||f||",
                          report.global_bound_ok, max_norm, report.global_bound});
    std::ostringstream csv;
    csv << "j,t,norm_u,bound,violation\n";
    for (int j = 0; j <= traj.step_count; ++j) {
        csv << j << ',' << csv_number(traj.time(j)) << ',' << csv_number(report.norms[j]) << ',';
        if (j > 0) {
            const double bound = report.per_step_bound[j - 1];
            csv << csv_number(bound) << ',' << csv_number(report.norms[j] - bound);
        } else {
            csv << ',';
        }
        csv << '\n';
    }
    out.csv = csv.str();
    out.fields.emplace_back("field_final.csv", traj.states.back());
    return out;
}

} // namespace

RunOutcome run(const RunConfig& config) {
    RunOutcome outcome;
    Outputs out;
    try {
        const Grid2D grid(config.grid_n);
        const ProblemSpec problem = build_problem(config.problem);
        switch (config.command) {
        case Command::ValidateField:
            out = run_validate_field(config, problem, grid);
            break;
        case Command::SolveParabolic:
            out = run_solve_parabolic(config, problem, grid);
            break;
        case Command::SolveStationary:
            out = run_solve_stationary(config, problem, grid);
            break;
        case Command::ConvergeParabolic:
            out = run_converge_parabolic(config, grid);
            break;
        case Command::ConvergeStationary:
            out = run_converge_stationary(config, grid);
            break;
        case Command::NormProbe:
            out = run_norm_probe(config, problem, grid);
            break;
        case Command::EnergyAudit:
            out = run_energy_audit(config, problem, grid);
            break;
        }
    } catch (const std::exception& e) {
        outcome.exit_code = 1;
        outcome.message = e.what();
        return outcome;
    }

    const bool passed = std::all_of(out.checks.begin(), out.checks.end(), [](const Check& c) { return c.passed; });
    json checks = json::array();
    json violations = json::array();
    for (const Check& c : out.checks) {
        checks.push_back(to_json(c));
        if (!c.passed) {
            violations.push_back(json{{"tag", c.tag}, {"inequality", c.inequality}});
        }
    }
    json report{
        {"schema", kSchema},
        {"command", to_string(config.command)},
        {"config", config_echo(config)},
        {"result", out.result},
        {"checks", checks},
        {"violations", violations},
        {"status", passed ? "pass" : "fail"},
        {"metadata", json{{"generated_at", timestamp()}, {"threads", worker_count()}}},
    };

    try {
        const std::filesystem::path dir(config.output_dir);
        std::filesystem::create_directories(dir);
        open_output(dir / "report.json") << report.dump(2) << '\n';
        open_output(dir / "report.csv") << out.csv;
        if (config.dump_fields) {
            for (const auto& [name, field] : out.fields) {
                std::ofstream file = open_output(dir / name);
                write_field_csv(file, field);
            }
        }
    } catch (const std::exception& e) {
        outcome.exit_code = 1;
        outcome.message = e.what();
        return outcome;
    }

    outcome.exit_code = passed ? 0 : 2;
    if (!passed) {
        std::ostringstream msg;
        msg << "check failed:";
        for (const Check& c : out.checks) {
            if (!c.passed) {
                msg << " [" << c.tag << "] " << c.inequality << ";";
            }
        }
        if (config.command == Command::ValidateField && out.result.value("closed_curve_detected", false)) {
            msg << " closed streamline detected";
        }
        outcome.message = msg.str();
    }
    return outcome;
}

int main(int argc, char** argv) {
    CLI::App app{"Directional diffusion splitting solver for 2D advection-diffusion-reaction problems"};
    std::string config_path;
    std::optional<std::string> output_dir;
    int threads = 1;
    std::optional<std::uint64_t> seed;
    app.add_option("config", config_path, "JSON run configuration")->required();
    app.add_option("--output-dir", output_dir, "Directory for report.json, report.csv and field dumps");
    app.add_option("--threads", threads, "Workers for line solves and streamline traces")
        ->check(CLI::PositiveNumber);
    app.add_option("--seed", seed, "Seed for the power-iteration start vector");
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    RunConfig config;
    try {
        config = load_config(config_path);
    } catch (const ConfigError& e) {
        std::cerr << config_path << ":" << e.what() << '\n';
        return 1;
    }
    if (output_dir) {
        config.output_dir = *output_dir;
    }
    if (seed) {
        config.seed = *seed;
    }
    set_worker_count(threads);

    const RunOutcome outcome = run(config);
    if (outcome.exit_code == 1) {
        std::cerr << "error: " << outcome.message << '\n';
    } else if (outcome.exit_code == 2) {
        std::cerr << outcome.message << '\n';
    } else {
        std::cout << to_string(config.command) << ": all checks passed; report written to " << config.output_dir
                  << '\n';
    }
    return outcome.exit_code;
}

} // namespace adrsplit::cli
