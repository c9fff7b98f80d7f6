#include "adrsplit/advection.hpp"
#include "adrsplit/analysis.hpp"
#include "adrsplit/cli.hpp"
#include "adrsplit/errors.hpp"
#include "adrsplit/expressions.hpp"
#include "adrsplit/operators.hpp"
#include "adrsplit/oracle.hpp"
#include "adrsplit/parallel.hpp"
#include "adrsplit/report.hpp"
#include "adrsplit/splitting.hpp"

#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <algorithm>
#include <optional>
#include <string>
#include <vector>

namespace py = pybind11;
using namespace adrsplit;

namespace {

using Array = py::array_t<double, py::array::c_style | py::array::forcecast>;

py::object to_python(const nlohmann::json& j) { return py::module_::import("json").attr("loads")(j.dump()); }

// Field values as an (n, n) array indexed [iy, ix].
Array to_array(const ScalarField& u) {
    const auto n = static_cast<py::ssize_t>(u.grid().n());
    Array out({n, n});
    std::copy(u.values().begin(), u.values().end(), out.mutable_data());
    return out;
}

Array stack(const std::vector<ScalarField>& fields, int n) {
    const auto m = static_cast<py::ssize_t>(fields.size());
    Array out({m, static_cast<py::ssize_t>(n), static_cast<py::ssize_t>(n)});
    double* dst = out.mutable_data();
    for (const auto& u : fields) dst = std::copy(u.values().begin(), u.values().end(), dst);
    return out;
}

ScalarField from_array(const Array& a) {
    if (a.ndim() != 2 || a.shape(0) != a.shape(1)) {
        throw InvalidArgument("field must be a square 2-D array");
    }
    const Grid2D grid(static_cast<int>(a.shape(0)));
    return ScalarField(grid, std::vector<double>(a.data(), a.data() + a.size()));
}

ManufacturedCase case_with_horizon(const std::string& id, std::optional<double> horizon) {
    ManufacturedCase mc = manufactured_case(id);
    if (horizon) mc.problem.horizon = *horizon;
    return mc;
}

py::dict trajectory_dict(const Trajectory& traj, int n) {
    py::dict d;
    std::vector<double> times;
    for (int j = 0; j <= traj.step_count; ++j) times.push_back(traj.time(j));
    d["dt"] = traj.dt;
    d["theta"] = traj.theta;
    d["step_count"] = traj.step_count;
    d["times"] = times;
    d["states"] = stack(traj.states, n);
    d["source_norms"] = traj.source_norms;
    return d;
}

} // namespace

PYBIND11_MODULE(_adrsplit, m) {
    m.doc() = "Directional diffusion splitting for 2-D advection-diffusion-reaction problems";

    m.def("worker_count", &worker_count);
    m.def("set_worker_count", &set_worker_count, py::arg("workers"));

    py::class_<Grid2D>(m, "Grid")
        .def(py::init<int>(), py::arg("n"))
        .def_property_readonly("n", &Grid2D::n)
        .def_property_readonly("h", &Grid2D::h)
        .def("coords", [](const Grid2D& g) {
            std::vector<double> c;
            for (int k = 0; k < g.n(); ++k) c.push_back(g.coord(k));
            return c;
        }, "Interior node coordinates along either axis.")
        .def("__repr__", [](const Grid2D& g) { return "Grid(n=" + std::to_string(g.n()) + ")"; });
    m.def("make_grid", &make_grid, py::arg("n"));

    m.def("discrete_l2_norm", [](const Array& u) { return discrete_l2_norm(from_array(u)); }, py::arg("u"),
          "sqrt(h^2 sum u^2) over interior nodes.");

    py::class_<cli::ProblemConfig>(m, "Problem")
        .def(py::init([](std::optional<std::string> case_id, double mu, double sigma, std::string advection,
                         std::string source, std::string initial, std::optional<double> horizon) {
                 cli::ProblemConfig c;
                 c.case_id = std::move(case_id);
                 c.mu = mu;
                 c.sigma = sigma;
                 c.advection = std::move(advection);
                 c.source = std::move(source);
                 c.initial = std::move(initial);
                 c.horizon = horizon;
                 // Fail on construction rather than on first use.
                 cli::build_problem(c).validate();
                 return c;
             }),
             py::kw_only(), py::arg("case") = py::none(), py::arg("mu") = 0.1, py::arg("sigma") = 1.0,
             py::arg("advection") = "constant-x(1)", py::arg("source") = "zero", py::arg("initial") = "zero",
             py::arg("horizon") = py::none())
        .def_readonly("case", &cli::ProblemConfig::case_id)
        .def_readonly("mu", &cli::ProblemConfig::mu)
        .def_readonly("sigma", &cli::ProblemConfig::sigma)
        .def_readonly("advection", &cli::ProblemConfig::advection);

    m.def(
        "validate_advection",
        [](const std::string& advection, int n, double mu, std::optional<double> tol) {
            return to_python(to_json(validate_advection(make_advection(advection), Grid2D(n), mu, tol)));
        },
        py::arg("advection"), py::arg("n"), py::arg("mu"), py::arg("tol") = py::none());

    m.def(
        "estimate_operator_norm",
        [](const cli::ProblemConfig& p, int n, double theta, double dt, double tol, int max_iter,
           std::uint64_t seed) {
            const auto ops = assemble_split_operators(cli::build_problem(p), Grid2D(n), theta, dt);
            return to_python(to_json(estimate_operator_norm(ops, tol, max_iter, seed)));
        },
        py::arg("problem"), py::arg("n"), py::arg("theta"), py::arg("dt"), py::arg("tol") = 1e-10,
        py::arg("max_iter") = 10000, py::arg("seed") = 42);

    m.def(
        "solve_parabolic",
        [](const cli::ProblemConfig& p, int n, double theta, double dt, bool double_time_axis) {
            ParabolicOptions options;
            options.double_time_axis = double_time_axis;
            const Trajectory traj = [&] {
                py::gil_scoped_release release;
                return solve_parabolic(cli::build_problem(p), Grid2D(n), theta, dt, options);
            }();
            return trajectory_dict(traj, n);
        },
        py::arg("problem"), py::arg("n"), py::arg("theta"), py::arg("dt"), py::arg("double_time_axis") = false);

    m.def(
        "solve_stationary",
        [](const cli::ProblemConfig& p, int n, double theta, double dt, double tol, int max_iter) {
            const StationaryResult r = solve_stationary(cli::build_problem(p), Grid2D(n), theta, dt, tol, max_iter);
            py::dict d = to_python(to_json(r));
            d["solution"] = to_array(r.solution);
            return d;
        },
        py::arg("problem"), py::arg("n"), py::arg("theta"), py::arg("dt"), py::arg("tol") = 1e-10,
        py::arg("max_iter") = 2000);

    m.def(
        "reference_elliptic",
        [](const cli::ProblemConfig& p, int n) { return to_array(reference_elliptic(cli::build_problem(p), Grid2D(n))); },
        py::arg("problem"), py::arg("n"));

    m.def(
        "sample_exact",
        [](const std::string& case_id, int n, double t) {
            return to_array(sample_exact(manufactured_case(case_id), Grid2D(n), t));
        },
        py::arg("case"), py::arg("n"), py::arg("t") = 0.0);

    m.def(
        "parabolic_convergence_study",
        [](const std::string& case_id, int n, double theta, const std::vector<double>& dts,
           std::optional<double> horizon) {
            return to_python(
                to_json(parabolic_convergence_study(case_with_horizon(case_id, horizon), Grid2D(n), theta, dts)));
        },
        py::arg("case"), py::arg("n"), py::arg("theta"), py::arg("dts"), py::arg("horizon") = py::none());

    m.def(
        "stationary_residual_study",
        [](const std::string& case_id, int n, double theta, const std::vector<double>& dts, double tol,
           int max_iter) {
            return to_python(
                to_json(stationary_residual_study(manufactured_case(case_id), Grid2D(n), theta, dts, tol, max_iter)));
        },
        py::arg("case"), py::arg("n"), py::arg("theta"), py::arg("dts"), py::arg("tol") = 1e-10,
        py::arg("max_iter") = 20000);

    m.def(
        "energy_check",
        [](const cli::ProblemConfig& p, int n, double dt) {
            const ProblemSpec problem = cli::build_problem(p);
            return to_python(to_json(energy_check(solve_parabolic(problem, Grid2D(n), 1.0, dt), problem)));
        },
        py::arg("problem"), py::arg("n"), py::arg("dt"), "Runs theta = 1 and checks both energy bounds.");

    m.def("observed_order", [](const std::vector<double>& errors, const std::vector<double>& dts) {
        return observed_order(errors, dts);
    }, py::arg("errors"), py::arg("dts"));

    py::register_exception<SingularSystemError>(m, "SingularSystemError", PyExc_RuntimeError);
    py::register_exception<SolverBreakdown>(m, "SolverBreakdown", PyExc_RuntimeError);
}
