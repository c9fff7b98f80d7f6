#pragma once

#include "adrsplit/problem.hpp"

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace adrsplit::cli {

enum class Command {
    ValidateField,
    SolveParabolic,
    SolveStationary,
    ConvergeParabolic,
    ConvergeStationary,
    NormProbe,
    EnergyAudit,
};

std::string to_string(Command command);

/// Problem data as written in the config: a manufactured case id or inline
/// coefficients with named expressions.
struct ProblemConfig {
    std::optional<std::string> case_id;
    double mu = 0.1;
    double sigma = 1.0;
    std::string advection = "constant-x(1)";
    std::string source = "zero";
    std::string initial = "zero";
    std::optional<double> horizon;
};

struct RunConfig {
    Command command = Command::NormProbe;
    ProblemConfig problem;
    int grid_n = 16;
    double theta = 1.0;
    std::vector<double> dts;
    std::optional<double> tol;
    std::optional<int> max_iter;
    std::uint64_t seed = 42;
    std::string output_dir = ".";
    bool double_time_axis = false;
    bool dump_fields = true;
    double min_order = 0.9;
    double order_low = 0.7;
    double order_high = 1.3;
};

/// Config rejected at parse or validation time; carries a 1-based line.
class ConfigError : public std::runtime_error {
public:
    ConfigError(int line, const std::string& message)
        : std::runtime_error("line " + std::to_string(line) + ": " + message), line_(line) {}
    int line() const noexcept { return line_; }

private:
    int line_;
};

RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::string& path);

/// Builds the ProblemSpec the config describes.
ProblemSpec build_problem(const ProblemConfig& config);

struct RunOutcome {
    /// 0 all checks pass, 2 a check failed, 1 usage or data error.
    int exit_code = 0;
    std::string message;
};

/// Runs the command and writes report.json, report.csv and field_*.csv into
/// config.output_dir.
RunOutcome run(const RunConfig& config);

/// `adr-split <config.json> [--output-dir D] [--threads N] [--seed S]`.
int main(int argc, char** argv);

} // namespace adrsplit::cli
