#include "adrsplit/splitting.hpp"

#include "adrsplit/errors.hpp"
#include "adrsplit/parallel.hpp"

#include <cmath>
#include <string>

namespace adrsplit {

ScalarField advection_substep(const ScalarField& u, const SplitOperators& ops, const ScalarField& f) {
    if (u.grid() != ops.grid() || f.grid() != ops.grid()) {
        throw InvalidArgument("advection_substep: inputs live on different grids");
    }
    ScalarField rhs = apply_rows(ops.rows_B_thetam1(), u);
    const double dt = ops.dt();
    for (std::size_t k = 0; k < rhs.values().size(); ++k) {
        rhs.values()[k] += dt * f.values()[k];
    }
    return solve_rows(ops.rows_B_theta(), rhs);
}

ScalarField diffusion_substep(const ScalarField& u_half, const SplitOperators& ops) {
    if (u_half.grid() != ops.grid()) {
        throw InvalidArgument("diffusion_substep: field and operators live on different grids");
    }
    return solve_cols(ops.cols_R_theta(), apply_cols(ops.cols_R_thetam1(), u_half));
}

ScalarField step(const ScalarField& u, const SplitOperators& ops, const ScalarField& f) {
    return diffusion_substep(advection_substep(u, ops, f), ops);
}

Trajectory solve_parabolic(const ProblemSpec& problem, const Grid2D& grid, double theta, double dt,
                           const ParabolicOptions& options) {
    problem.validate();
    if (!(theta >= 0.5 && theta <= 1.0)) {
        throw InvalidArgument("parabolic runs need theta in [1/2, 1], got " + std::to_string(theta));
    }
    if (!(dt > 0.0) || dt > problem.horizon) {
        throw InvalidArgument("time step must satisfy 0 < dt <= horizon");
    }
    const SplitOperators ops = assemble_split_operators(problem, grid, theta, dt);

    Trajectory traj;
    traj.dt = dt;
    traj.theta = theta;
    traj.time_scale = options.double_time_axis ? 2.0 : 1.0;
    // Guard against ratios such as 0.5/(1/64) landing a hair above an integer.
    traj.step_count = static_cast<int>(std::ceil(problem.horizon / dt - 1e-9));
    traj.states.reserve(traj.step_count + 1);
    traj.states.push_back(sample_initial(problem, grid));

    ScalarField f = sample_source(problem, grid, 0.0);
    const double step_length = dt * traj.time_scale;
    for (int j = 0; j < traj.step_count; ++j) {
        if (problem.source_time_dependent) {
            f = sample_source(problem, grid, j * step_length + theta * step_length);
        }
        traj.source_norms.push_back(discrete_l2_norm(f));
        ScalarField half = advection_substep(traj.states.back(), ops, f);
        ScalarField next = diffusion_substep(half, ops);
        if (options.record_half_states) {
            traj.half_states.push_back(std::move(half));
        }
        traj.states.push_back(std::move(next));
    }
    return traj;
}

ScalarField initial_guess_stationary(const ProblemSpec& problem, const Grid2D& grid) {
    problem.validate();
    if (!is_axis_aligned(problem.advection, grid)) {
        throw InvalidArgument("stationary initial guess needs axis-aligned advection");
    }
    const int n = grid.n();
    const ScalarField f = sample_source(problem, grid, 0.0);
    ScalarField u0(grid);
    parallel_for(static_cast<std::size_t>(n), [&](std::size_t k) {
        const int iy = static_cast<int>(k);
        std::vector<double> beta(n);
        for (int ix = 0; ix < n; ++ix) {
            beta[ix] = problem.advection(grid.coord(ix), grid.coord(iy)).x;
        }
        const LineOperator op = streamwise_line(beta, problem.mu, problem.sigma, grid.h(), 1.0, 0.0);
        std::vector<double> work(n);
        line_solve(op, f.row(iy), u0.row(iy), work);
    });
    return u0;
}

double elliptic_residual(const ProblemSpec& problem, const ScalarField& u) {
    ScalarField r = apply_full_operator(problem, u);
    r -= sample_source(problem, u.grid(), 0.0);
    return discrete_l2_norm(r);
}

StationaryResult solve_stationary(const ProblemSpec& problem, const Grid2D& grid, double theta, double dt,
                                  double tol, int max_iter) {
    if (!(theta > 0.5 && theta <= 1.0)) {
        throw InvalidArgument(
            "stationary iteration requires theta > 1/2 strictly (got " + std::to_string(theta) +
            "); at theta = 1/2 the one-step operator is only bounded by 1 and need not contract");
    }
    if (!(tol > 0.0)) {
        throw InvalidArgument("stationary tolerance must be positive");
    }
    if (max_iter < 1) {
        throw InvalidArgument("stationary iteration needs at least one iteration");
    }
    const SplitOperators ops = assemble_split_operators(problem, grid, theta, dt);
    const ScalarField f = sample_source(problem, grid, 0.0);

    StationaryResult result;
    result.solution = initial_guess_stationary(problem, grid);
    for (int j = 1; j <= max_iter; ++j) {
        ScalarField next = step(result.solution, ops, f);
        result.final_update_norm = discrete_l2_norm(next - result.solution);
        result.solution = std::move(next);
        result.iterations = j;
        if (result.final_update_norm <= tol) {
            result.converged = true;
            break;
        }
    }
    result.elliptic_residual = elliptic_residual(problem, result.solution);
    return result;
}

} // namespace adrsplit
