#include "adrsplit/oracle.hpp"

#include "adrsplit/banded.hpp"
#include "adrsplit/errors.hpp"
#include "adrsplit/expressions.hpp"

#include <cmath>
#include <memory>
#include <numbers>
#include <optional>

namespace adrsplit {

using std::numbers::pi;

ManufacturedCase manufactured_case(const std::string& id) {
    constexpr double mu = 0.1;
    constexpr double sigma = 1.0;
    constexpr double beta = 1.0;

    ManufacturedCase mc;
    mc.id = id;
    mc.problem.mu = mu;
    mc.problem.sigma = sigma;
    mc.problem.advection = make_advection("constant-x(1)");
    mc.problem.horizon = 1.0;

    if (id == "MP1") {
        mc.parabolic = true;
        mc.exact = [](double x, double y, double t) {
            return std::exp(-t) * std::sin(pi * x) * std::sin(pi * y);
        };
        mc.problem.source = [](double x, double y, double t) {
            const double sy = std::sin(pi * y);
            return std::exp(-t) * ((-1.0 + 2.0 * mu * pi * pi + sigma) * std::sin(pi * x) * sy +
                                   beta * pi * std::cos(pi * x) * sy);
        };
        mc.problem.source_time_dependent = true;
        mc.problem.initial = [](double x, double y) { return std::sin(pi * x) * std::sin(pi * y); };
    } else if (id == "ME1") {
        mc.exact = [](double x, double y, double) { return std::sin(pi * x) * std::sin(pi * y); };
        mc.problem.source = [](double x, double y, double) {
            const double sy = std::sin(pi * y);
            return (2.0 * mu * pi * pi + sigma) * std::sin(pi * x) * sy + beta * pi * std::cos(pi * x) * sy;
        };
        mc.problem.initial = [](double, double) { return 0.0; };
    } else if (id == "ME0") {
        mc.exact = [](double, double, double) { return 0.0; };
        mc.problem.source = [](double, double, double) { return 0.0; };
        mc.problem.initial = [](double, double) { return 0.0; };
    } else {
        throw InvalidArgument("unknown manufactured case '" + id + "' (expected MP1, ME1 or ME0)");
    }
    return mc;
}

double manufactured_residual(const ManufacturedCase& mc, double x, double y, double t) {
    // All cases are multiples of s(x, y) = sin(pi x) sin(pi y) in space.
    double amplitude = 0.0;
    double amplitude_dt = 0.0;
    if (mc.id == "MP1") {
        amplitude = std::exp(-t);
        amplitude_dt = -amplitude;
    } else if (mc.id == "ME1") {
        amplitude = 1.0;
    }
    const double s = std::sin(pi * x) * std::sin(pi * y);
    const double sx = pi * std::cos(pi * x) * std::sin(pi * y);
    const double sy = pi * std::sin(pi * x) * std::cos(pi * y);
    const double laplacian = -2.0 * pi * pi * s;
    const Vec2 b = mc.problem.advection(x, y);
    const ProblemSpec& p = mc.problem;
    const double lhs = amplitude_dt * s - p.mu * amplitude * laplacian + amplitude * (b.x * sx + b.y * sy) +
                       p.sigma * amplitude * s;
    return lhs - p.source(x, y, t);
}

ScalarField sample_exact(const ManufacturedCase& mc, const Grid2D& grid, double t) {
    return sample(grid, [&](double x, double y) { return mc.exact(x, y, t); });
}

namespace {

// identity_weight * I + scale * A_h as CSR; unknown (ix, iy) is iy * n + ix.
SparseMatrix assemble_system(const ProblemSpec& problem, const Grid2D& grid, double identity_weight,
                             double scale) {
    const int n = grid.n();
    const double h = grid.h();
    const double diffusion = problem.mu / (h * h);
    SparseMatrix m;
    m.rows = grid.size();
    m.row_start.reserve(m.rows + 1);
    m.row_start.push_back(0);
    auto push = [&](int ix, int iy, double v) {
        if (ix < 0 || iy < 0 || ix >= n || iy >= n) {
            return;
        }
        m.col.push_back(static_cast<std::size_t>(iy) * n + ix);
        m.value.push_back(v);
    };
    for (int iy = 0; iy < n; ++iy) {
        for (int ix = 0; ix < n; ++ix) {
            const Vec2 b = problem.advection(grid.coord(ix), grid.coord(iy));
            push(ix, iy - 1, scale * (-diffusion - b.y / (2.0 * h)));
            push(ix - 1, iy, scale * (-diffusion - b.x / (2.0 * h)));
            push(ix, iy, identity_weight + scale * (4.0 * diffusion + problem.sigma));
            push(ix + 1, iy, scale * (-diffusion + b.x / (2.0 * h)));
            push(ix, iy + 1, scale * (-diffusion + b.y / (2.0 * h)));
            m.row_start.push_back(m.col.size());
        }
    }
    return m;
}

double euclidean(std::span<const double> v) {
    double sum = 0.0;
    for (double x : v) {
        sum += x * x;
    }
    return std::sqrt(sum);
}

constexpr int kDirectLimit = 128;
constexpr double kResidualTarget = 1e-12;

class ReferenceSolver {
public:
    ReferenceSolver(SparseMatrix matrix, int n, ReferenceMethod method) : matrix_(std::move(matrix)) {
        const bool direct = method == ReferenceMethod::Direct ||
                            (method == ReferenceMethod::Automatic && n <= kDirectLimit);
        if (direct) {
            lu_.emplace(matrix_, static_cast<std::size_t>(n), static_cast<std::size_t>(n));
        }
    }

    std::vector<double> solve(const std::vector<double>& rhs) const {
        std::vector<double> x = rhs;
        const double rhs_norm = euclidean(rhs);
        if (rhs_norm == 0.0) {
            std::fill(x.begin(), x.end(), 0.0);
            return x;
        }
        if (lu_) {
            lu_->solve(x);
            // One round of refinement keeps the relative residual at the 1e-12 target.
            std::vector<double> r = residual(x, rhs);
            if (euclidean(r) > kResidualTarget * rhs_norm) {
                lu_->solve(r);
                for (std::size_t k = 0; k < x.size(); ++k) {
                    x[k] += r[k];
                }
            }
        } else {
            x = cgnr(rhs, rhs_norm);
        }
        if (euclidean(residual(x, rhs)) > kResidualTarget * rhs_norm) {
            throw SolverBreakdown("reference solve missed its residual target");
        }
        return x;
    }

private:
    std::vector<double> residual(const std::vector<double>& x, const std::vector<double>& rhs) const {
        std::vector<double> r(rhs.size());
        matrix_.multiply(x, r);
        for (std::size_t k = 0; k < r.size(); ++k) {
            r[k] = rhs[k] - r[k];
        }
        return r;
    }

    std::vector<double> cgnr(const std::vector<double>& rhs, double rhs_norm) const {
        const std::size_t size = rhs.size();
        std::vector<double> x(size, 0.0);
        std::vector<double> r = rhs;
        std::vector<double> z(size);
        matrix_.multiply_transpose(r, z);
        std::vector<double> p = z;
        std::vector<double> w(size);
        double zz = 0.0;
        for (double v : z) {
            zz += v * v;
        }
        const std::size_t max_iter = 20 * size;
        for (std::size_t it = 0; it < max_iter && euclidean(r) > 0.5 * kResidualTarget * rhs_norm; ++it) {
            matrix_.multiply(p, w);
            const double ww = euclidean(w);
            if (ww == 0.0) {
                break;
            }
            const double alpha = zz / (ww * ww);
            for (std::size_t k = 0; k < size; ++k) {
                x[k] += alpha * p[k];
                r[k] -= alpha * w[k];
            }
            matrix_.multiply_transpose(r, z);
            double zz_next = 0.0;
            for (double v : z) {
                zz_next += v * v;
            }
            const double beta = zz_next / zz;
            zz = zz_next;
            for (std::size_t k = 0; k < size; ++k) {
                p[k] = z[k] + beta * p[k];
            }
        }
        return x;
    }

    SparseMatrix matrix_;
    std::optional<BandedLU> lu_;
};

} // namespace

Trajectory reference_parabolic(const ProblemSpec& problem, const Grid2D& grid, double theta, double dt,
                               ReferenceMethod method) {
    problem.validate();
    if (!(theta >= 0.5 && theta <= 1.0)) {
        throw InvalidArgument("reference theta-scheme needs theta in [1/2, 1]");
    }
    if (!(dt > 0.0) || dt > problem.horizon) {
        throw InvalidArgument("time step must satisfy 0 < dt <= horizon");
    }
    const ReferenceSolver implicit(assemble_system(problem, grid, 1.0, theta * dt), grid.n(), method);
    const SparseMatrix explicit_part = assemble_system(problem, grid, 1.0, (theta - 1.0) * dt);

    Trajectory traj;
    traj.dt = dt;
    traj.theta = theta;
    traj.step_count = static_cast<int>(std::ceil(problem.horizon / dt - 1e-9));
    traj.states.push_back(sample_initial(problem, grid));
    ScalarField f = sample_source(problem, grid, 0.0);
    std::vector<double> rhs(grid.size());
    for (int j = 0; j < traj.step_count; ++j) {
        if (problem.source_time_dependent) {
            f = sample_source(problem, grid, (j + theta) * dt);
        }
        traj.source_norms.push_back(discrete_l2_norm(f));
        explicit_part.multiply(traj.states.back().values(), rhs);
        for (std::size_t k = 0; k < rhs.size(); ++k) {
            rhs[k] += dt * f.values()[k];
        }
        traj.states.emplace_back(grid, implicit.solve(rhs));
    }
    return traj;
}

ScalarField reference_elliptic(const ProblemSpec& problem, const Grid2D& grid, ReferenceMethod method) {
    problem.validate();
    const ReferenceSolver solver(assemble_system(problem, grid, 0.0, 1.0), grid.n(), method);
    return ScalarField(grid, solver.solve(sample_source(problem, grid, 0.0).values()));
}

} // namespace adrsplit
