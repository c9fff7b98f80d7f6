#include "adrsplit/operators.hpp"

#include "adrsplit/errors.hpp"
#include "adrsplit/parallel.hpp"

#include <cmath>
#include <random>
#include <string>

namespace adrsplit {

LineOperator streamwise_line(std::span<const double> beta, double mu, double sigma, double h, double scale,
                             double identity_weight) {
    const std::size_t n = beta.size();
    const double diffusion = mu / (h * h);
    const double advection = 1.0 / (2.0 * h);
    LineOperator op;
    op.diag.resize(n);
    op.lower.resize(n - 1);
    op.upper.resize(n - 1);
    for (std::size_t i = 0; i < n; ++i) {
        op.diag[i] = identity_weight + scale * (2.0 * diffusion + sigma);
        if (i > 0) {
            op.lower[i - 1] = scale * (-diffusion - beta[i] * advection);
        }
        if (i + 1 < n) {
            op.upper[i] = scale * (-diffusion + beta[i] * advection);
        }
    }
    return op;
}

LineOperator cross_stream_line(int n, double mu, double h, double scale) {
    const double diffusion = mu / (h * h);
    LineOperator op;
    op.diag.assign(n, 1.0 + scale * 2.0 * diffusion);
    op.lower.assign(n - 1, -scale * diffusion);
    op.upper.assign(n - 1, -scale * diffusion);
    return op;
}

SplitOperators assemble_split_operators(const ProblemSpec& problem, const Grid2D& grid, double theta,
                                        double dt) {
    problem.validate();
    if (!(theta > 0.0 && theta <= 1.0)) {
        throw InvalidArgument("theta must lie in (0, 1], got " + std::to_string(theta));
    }
    if (!(dt > 0.0) || !std::isfinite(dt)) {
        throw InvalidArgument("time step must be positive");
    }
    if (!is_axis_aligned(problem.advection, grid)) {
        throw InvalidArgument("split operators need axis-aligned advection beta = (beta(x,y), 0)");
    }

    const int n = grid.n();
    const double h = grid.h();
    SplitOperators ops;
    ops.grid_ = grid;
    ops.theta_ = theta;
    ops.dt_ = dt;
    ops.mu_ = problem.mu;
    ops.sigma_ = problem.sigma;

    std::vector<double> beta(n);
    for (int iy = 0; iy < n; ++iy) {
        for (int ix = 0; ix < n; ++ix) {
            beta[ix] = problem.advection(grid.coord(ix), grid.coord(iy)).x;
        }
        ops.rows_B_theta_.push_back(streamwise_line(beta, problem.mu, problem.sigma, h, theta * dt, 1.0));
        ops.rows_B_thetam1_.push_back(
            streamwise_line(beta, problem.mu, problem.sigma, h, (theta - 1.0) * dt, 1.0));
    }
    for (int ix = 0; ix < n; ++ix) {
        ops.cols_R_theta_.push_back(cross_stream_line(n, problem.mu, h, theta * dt));
        ops.cols_R_thetam1_.push_back(cross_stream_line(n, problem.mu, h, (theta - 1.0) * dt));
    }

    for (int k = 0; k < n; ++k) {
        try {
            check_factorizable(ops.rows_B_theta_[k]);
            check_factorizable(ops.cols_R_theta_[k]);
        } catch (const SingularSystemError& e) {
            throw SingularSystemError("implicit line " + std::to_string(k) + " is singular: " + e.what());
        }
    }
    return ops;
}

namespace {

void require_lines(const std::vector<LineOperator>& lines, const ScalarField& u) {
    if (lines.size() != static_cast<std::size_t>(u.n())) {
        throw InvalidArgument("line operators do not match the field's grid");
    }
}

} // namespace

ScalarField apply_rows(const std::vector<LineOperator>& rows, const ScalarField& u, bool transpose) {
    require_lines(rows, u);
    ScalarField out(u.grid());
    parallel_for(rows.size(), [&](std::size_t iy) {
        const int row = static_cast<int>(iy);
        if (transpose) {
            line_apply(rows[iy].transposed(), u.row(row), out.row(row));
        } else {
            line_apply(rows[iy], u.row(row), out.row(row));
        }
    });
    return out;
}

ScalarField solve_rows(const std::vector<LineOperator>& rows, const ScalarField& rhs, bool transpose) {
    require_lines(rows, rhs);
    ScalarField out(rhs.grid());
    parallel_for(rows.size(), [&](std::size_t iy) {
        const int row = static_cast<int>(iy);
        std::vector<double> work(rows[iy].size());
        if (transpose) {
            line_solve(rows[iy].transposed(), rhs.row(row), out.row(row), work);
        } else {
            line_solve(rows[iy], rhs.row(row), out.row(row), work);
        }
    });
    return out;
}

namespace {

template <typename LineFn>
ScalarField sweep_cols(const std::vector<LineOperator>& cols, const ScalarField& in, LineFn&& fn) {
    require_lines(cols, in);
    const int n = in.n();
    ScalarField out(in.grid());
    parallel_for(cols.size(), [&](std::size_t k) {
        const int ix = static_cast<int>(k);
        std::vector<double> line(n);
        std::vector<double> result(n);
        for (int iy = 0; iy < n; ++iy) {
            line[iy] = in.at(ix, iy);
        }
        fn(cols[k], line, result);
        for (int iy = 0; iy < n; ++iy) {
            out.at(ix, iy) = result[iy];
        }
    });
    return out;
}

} // namespace

ScalarField apply_cols(const std::vector<LineOperator>& cols, const ScalarField& u, bool transpose) {
    return sweep_cols(cols, u, [transpose](const LineOperator& op, std::span<const double> x, std::span<double> y) {
        if (transpose) {
            line_apply(op.transposed(), x, y);
        } else {
            line_apply(op, x, y);
        }
    });
}

ScalarField solve_cols(const std::vector<LineOperator>& cols, const ScalarField& rhs, bool transpose) {
    return sweep_cols(cols, rhs, [transpose](const LineOperator& op, std::span<const double> b, std::span<double> x) {
        std::vector<double> work(op.size());
        if (transpose) {
            line_solve(op.transposed(), b, x, work);
        } else {
            line_solve(op, b, x, work);
        }
    });
}

ScalarField apply_T(const SplitOperators& ops, const ScalarField& u) {
    if (u.grid() != ops.grid()) {
        throw InvalidArgument("apply_T: field and operators live on different grids");
    }
    ScalarField v = apply_rows(ops.rows_B_thetam1(), u);
    v = solve_rows(ops.rows_B_theta(), v);
    v = apply_cols(ops.cols_R_thetam1(), v);
    return solve_cols(ops.cols_R_theta(), v);
}

ScalarField apply_T_adjoint(const SplitOperators& ops, const ScalarField& u) {
    if (u.grid() != ops.grid()) {
        throw InvalidArgument("apply_T_adjoint: field and operators live on different grids");
    }
    ScalarField v = solve_cols(ops.cols_R_theta(), u, true);
    v = apply_cols(ops.cols_R_thetam1(), v, true);
    v = solve_rows(ops.rows_B_theta(), v, true);
    return apply_rows(ops.rows_B_thetam1(), v, true);
}

ScalarField apply_full_operator(const ProblemSpec& problem, const ScalarField& u) {
    const Grid2D& grid = u.grid();
    const int n = grid.n();
    const double h = grid.h();
    const double diffusion = problem.mu / (h * h);
    ScalarField out(grid);
    auto value = [&](int ix, int iy) {
        return (ix < 0 || iy < 0 || ix >= n || iy >= n) ? 0.0 : u.at(ix, iy);
    };
    for (int iy = 0; iy < n; ++iy) {
        for (int ix = 0; ix < n; ++ix) {
            const Vec2 b = problem.advection(grid.coord(ix), grid.coord(iy));
            const double c = u.at(ix, iy);
            const double e = value(ix + 1, iy);
            const double w = value(ix - 1, iy);
            const double no = value(ix, iy + 1);
            const double so = value(ix, iy - 1);
            out.at(ix, iy) = diffusion * (4.0 * c - e - w - no - so) + b.x * (e - w) / (2.0 * h) +
                             b.y * (no - so) / (2.0 * h) + problem.sigma * c;
        }
    }
    return out;
}

NormEstimate estimate_operator_norm(const SplitOperators& ops, double tol, int max_iter, std::uint64_t seed) {
    if (!(tol > 0.0)) {
        throw InvalidArgument("norm estimate tolerance must be positive");
    }
    if (max_iter < 1) {
        throw InvalidArgument("norm estimate needs at least one iteration");
    }
    auto euclidean_norm = [](const ScalarField& v) {
        double sum = 0.0;
        for (double x : v.values()) {
            sum += x * x;
        }
        return std::sqrt(sum);
    };

    ScalarField x(ops.grid());
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> uniform(-1.0, 1.0);
    for (double& v : x.values()) {
        v = uniform(rng);
    }
    x *= 1.0 / euclidean_norm(x);

    NormEstimate estimate;
    double previous = 0.0;
    for (int k = 1; k <= max_iter; ++k) {
        const ScalarField tx = apply_T(ops, x);
        const double tx_norm = euclidean_norm(tx);
        const double rayleigh = tx_norm * tx_norm;
        estimate.iterations = k;
        estimate.value = std::sqrt(rayleigh);
        if (rayleigh == 0.0) {
            estimate.residual = 0.0;
            estimate.converged = true;
            break;
        }
        estimate.residual = k == 1 ? 1.0 : std::abs(rayleigh - previous) / rayleigh;
        if (k > 1 && estimate.residual <= tol) {
            estimate.converged = true;
            break;
        }
        previous = rayleigh;
        ScalarField y = apply_T_adjoint(ops, tx);
        const double y_norm = euclidean_norm(y);
        if (y_norm == 0.0) {
            estimate.converged = true;
            break;
        }
        x = (1.0 / y_norm) * std::move(y);
    }
    return estimate;
}

} // namespace adrsplit
