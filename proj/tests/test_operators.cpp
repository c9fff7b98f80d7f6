#include "adrsplit/errors.hpp"
#include "adrsplit/expressions.hpp"
#include "adrsplit/operators.hpp"
#include "adrsplit/oracle.hpp"
#include "adrsplit/parallel.hpp"

#include "dense_oracle.hpp"

#include <doctest.h>

#include <Eigen/SVD>

#include <cmath>
#include <random>

using namespace adrsplit;
using adrsplit::testing::random_field;
using adrsplit::testing::to_field;
using adrsplit::testing::to_vector;

namespace {

ProblemSpec problem(double mu, double sigma, const std::string& beta) {
    ProblemSpec p;
    p.mu = mu;
    p.sigma = sigma;
    p.advection = make_advection(beta);
    p.source = [](double, double, double) { return 0.0; };
    p.initial = [](double, double) { return 0.0; };
    return p;
}

bool is_identity(const LineOperator& op) { return op == LineOperator::identity(op.size()); }

} // namespace

TEST_CASE("theta = 1 makes the explicit operators the identity") {
    const auto ops = assemble_split_operators(problem(0.3, 2.0, "shear(1, 0.5)"), Grid2D(6), 1.0, 0.37);
    for (const auto& op : ops.rows_B_thetam1()) CHECK(is_identity(op));
    for (const auto& op : ops.cols_R_thetam1()) CHECK(is_identity(op));
    CHECK(ops.rows_B_theta().size() == 6);
    CHECK(ops.cols_R_theta().size() == 6);
}

TEST_CASE("cross-stream diagonal for n = 3") {
    const auto ops = assemble_split_operators(problem(1.0, 1.0, "constant-x(0)"), Grid2D(3), 1.0, 0.1);
    for (const auto& col : ops.cols_R_theta()) {
        for (double d : col.diag) CHECK(d == doctest::Approx(4.2).epsilon(1e-14));
        for (double l : col.lower) CHECK(l == doctest::Approx(-1.6).epsilon(1e-14));
    }
}

TEST_CASE("line entries match the closed-form stencil at random nodes") {
    const double mu = 0.2;
    const double sigma = 1.5;
    const double theta = 0.7;
    const double dt = 0.05;
    const ProblemSpec p = problem(mu, sigma, "shear(1, 2)");
    const Grid2D grid(10);
    const double h = grid.h();
    const auto ops = assemble_split_operators(p, grid, theta, dt);
    std::mt19937_64 rng(19);
    std::uniform_int_distribution<int> pick(1, grid.n() - 2);
    for (int sample = 0; sample < 3; ++sample) {
        const int ix = pick(rng);
        const int iy = pick(rng);
        const double beta = 1.0 + 2.0 * grid.coord(iy);
        for (const auto& [c, row] : {std::pair{theta * dt, &ops.rows_B_theta()[iy]},
                                     std::pair{(theta - 1.0) * dt, &ops.rows_B_thetam1()[iy]}}) {
            CHECK(row->diag[ix] == doctest::Approx(1.0 + c * (2.0 * mu / (h * h) + sigma)).epsilon(1e-14));
            CHECK(row->lower[ix - 1] == doctest::Approx(c * (-mu / (h * h) - beta / (2.0 * h))).epsilon(1e-14));
            CHECK(row->upper[ix] == doctest::Approx(c * (-mu / (h * h) + beta / (2.0 * h))).epsilon(1e-14));
        }
        const auto& col = ops.cols_R_theta()[ix];
        CHECK(col.diag[iy] == doctest::Approx(1.0 + theta * dt * 2.0 * mu / (h * h)).epsilon(1e-14));
        CHECK(col.upper[iy] == doctest::Approx(-theta * dt * mu / (h * h)).epsilon(1e-14));
    }
}

TEST_CASE("assembly preconditions") {
    const Grid2D grid(4);
    CHECK_THROWS_AS(assemble_split_operators(problem(0.1, 1.0, "constant(1, 1)"), grid, 1.0, 0.1), InvalidArgument);
    CHECK_THROWS_AS(assemble_split_operators(problem(0.1, 1.0, "constant-x(1)"), grid, 0.0, 0.1), InvalidArgument);
    CHECK_THROWS_AS(assemble_split_operators(problem(0.1, 1.0, "constant-x(1)"), grid, 1.2, 0.1), InvalidArgument);
    CHECK_THROWS_AS(assemble_split_operators(problem(0.1, 1.0, "constant-x(1)"), grid, 1.0, 0.0), InvalidArgument);
    CHECK_THROWS_AS(assemble_split_operators(problem(0.1, 0.0, "constant-x(1)"), grid, 1.0, 0.1), InvalidArgument);
    CHECK_THROWS_AS(assemble_split_operators(problem(0.0, 1.0, "constant-x(1)"), grid, 1.0, 0.1), InvalidArgument);
}

TEST_CASE("apply_T against the dense product on n = 8") {
    const Grid2D grid(8);
    std::mt19937_64 rng(23);
    for (const double theta : {0.5, 0.75, 1.0}) {
        const ProblemSpec p = problem(0.1, 1.0, "shear(1, -0.5)");
        const auto ops = assemble_split_operators(p, grid, theta, 0.1);
        const Eigen::MatrixXd t = adrsplit::testing::dense_T(p, grid, theta, 0.1);
        for (int trial = 0; trial < 3; ++trial) {
            const ScalarField u = random_field(grid, rng);
            const ScalarField tu = apply_T(ops, u);
            CHECK(max_abs_difference(tu, to_field(grid, t * to_vector(u))) <= 1e-10);
            const ScalarField ttu = apply_T_adjoint(ops, u);
            CHECK(max_abs_difference(ttu, to_field(grid, t.transpose() * to_vector(u))) <= 1e-10);
        }
    }
}

TEST_CASE("apply_T special cases") {
    const Grid2D grid(6);
    const ProblemSpec p = problem(0.1, 1.0, "constant-x(1)");
    const auto ops = assemble_split_operators(p, grid, 1.0, 0.2);
    CHECK(max_abs_difference(apply_T(ops, ScalarField(grid)), ScalarField(grid)) == 0.0);
    CHECK(max_abs_difference(apply_T_adjoint(ops, ScalarField(grid)), ScalarField(grid)) == 0.0);

    std::mt19937_64 rng(2);
    const ScalarField u = random_field(grid, rng);
    // theta = 1: row solve then column solve.
    const ScalarField direct = solve_cols(ops.cols_R_theta(), solve_rows(ops.rows_B_theta(), u));
    CHECK(max_abs_difference(apply_T(ops, u), direct) <= 1e-15);

    CHECK_THROWS_AS(apply_T(ops, ScalarField(Grid2D(5))), InvalidArgument);
}

TEST_CASE("adjoint identity and linearity on random inputs") {
    const Grid2D grid(8);
    const ProblemSpec p = problem(0.1, 1.0, "shear(2, -1)");
    const auto ops = assemble_split_operators(p, grid, 0.6, 0.3);
    std::mt19937_64 rng(31);
    std::uniform_real_distribution<double> uniform(-3.0, 3.0);
    for (int trial = 0; trial < 10; ++trial) {
        const ScalarField u = random_field(grid, rng);
        const ScalarField v = random_field(grid, rng);
        CHECK(discrete_inner(apply_T(ops, u), v) == doctest::Approx(discrete_inner(u, apply_T_adjoint(ops, v))).epsilon(1e-10));

        const double a = uniform(rng);
        const double b = uniform(rng);
        const ScalarField lhs = apply_T(ops, a * u + b * v);
        const ScalarField rhs = a * apply_T(ops, u) + b * apply_T(ops, v);
        CHECK(max_abs_difference(lhs, rhs) <= 1e-10);
    }
}

TEST_CASE("apply_T is bitwise independent of the worker count") {
    const Grid2D grid(33);
    const ProblemSpec p = problem(0.1, 1.0, "shear(1, 0.5)");
    const auto ops = assemble_split_operators(p, grid, 0.75, 0.1);
    std::mt19937_64 rng(8);
    const ScalarField u = random_field(grid, rng);
    const ScalarField serial = apply_T(ops, u);
    for (int workers : {2, 3, 8}) {
        set_worker_count(workers);
        CHECK(apply_T(ops, u).values() == serial.values());
    }
    set_worker_count(1);
}

TEST_CASE("full operator matches the dense five-point matrix") {
    const Grid2D grid(7);
    const ProblemSpec p = problem(0.2, 1.3, "stagnation(1)");
    std::mt19937_64 rng(4);
    const ScalarField u = random_field(grid, rng);
    const Eigen::MatrixXd a = adrsplit::testing::dense_full_operator(p, grid);
    CHECK(max_abs_difference(apply_full_operator(p, u), to_field(grid, a * to_vector(u))) <= 1e-10);
}

TEST_CASE("operator norm examples") {
    const ProblemSpec p = problem(1.0, 1.0, "constant-x(1)");
    const Grid2D grid(16);
    const NormEstimate contraction = estimate_operator_norm(assemble_split_operators(p, grid, 0.75, 0.1));
    CHECK(contraction.converged);
    CHECK(contraction.residual <= 1e-10);
    CHECK(contraction.value < 1.0);

    const NormEstimate bounded = estimate_operator_norm(assemble_split_operators(p, grid, 0.5, 0.1));
    CHECK(bounded.value <= 1.0 + 1e-8);
}

TEST_CASE("operator norm matches the dense largest singular value on n = 8") {
    const Grid2D grid(8);
    for (const char* beta : {"constant-x(1)", "shear(1, 0.5)"}) {
        for (const double theta : {0.5, 0.75, 1.0}) {
            for (const double dt : {0.02, 0.5}) {
                CAPTURE(beta);
                CAPTURE(theta);
                CAPTURE(dt);
                const ProblemSpec p = problem(0.1, 1.0, beta);
                const NormEstimate est = estimate_operator_norm(assemble_split_operators(p, grid, theta, dt));
                const Eigen::JacobiSVD<Eigen::MatrixXd> svd(adrsplit::testing::dense_T(p, grid, theta, dt));
                CHECK(est.converged);
                CHECK(std::abs(est.value - svd.singularValues()(0)) <= 1e-6);
            }
        }
    }
}

TEST_CASE("norm estimate is reproducible and reports non-convergence") {
    const ProblemSpec p = problem(0.1, 1.0, "constant-x(1)");
    const auto ops = assemble_split_operators(p, Grid2D(8), 0.5, 0.5);
    const NormEstimate a = estimate_operator_norm(ops, 1e-10, 10000, 42);
    const NormEstimate b = estimate_operator_norm(ops, 1e-10, 10000, 42);
    CHECK(a.value == b.value);
    CHECK(a.iterations == b.iterations);

    const NormEstimate short_run = estimate_operator_norm(ops, 1e-14, 3, 42);
    CHECK_FALSE(short_run.converged);
    CHECK(short_run.iterations == 3);
    CHECK_THROWS_AS(estimate_operator_norm(ops, 0.0), InvalidArgument);
}
