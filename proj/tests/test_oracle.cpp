#include "adrsplit/banded.hpp"
#include "adrsplit/errors.hpp"
#include "adrsplit/oracle.hpp"
#include "adrsplit/splitting.hpp"

#include "dense_oracle.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

using namespace adrsplit;
using adrsplit::testing::dense_full_operator;
using adrsplit::testing::to_field;
using adrsplit::testing::to_vector;

namespace {

constexpr double pi = std::numbers::pi;

double final_error(const ManufacturedCase& mc, const Trajectory& traj, const Grid2D& grid) {
    return discrete_l2_norm(traj.states.back() - sample_exact(mc, grid, traj.time(traj.step_count)));
}

} // namespace

TEST_CASE("manufactured residuals vanish") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (const char* id : {"MP1", "ME1", "ME0"}) {
        CAPTURE(id);
        const ManufacturedCase mc = manufactured_case(id);
        for (int k = 0; k < 20; ++k) {
            const double x = unit(rng);
            const double y = unit(rng);
            const double t = unit(rng);
            CHECK(std::abs(manufactured_residual(mc, x, y, t)) <= 1e-8);
        }
    }
    CHECK_THROWS_AS(manufactured_case("MX9"), InvalidArgument);
}

TEST_CASE("manufactured sources") {
    const ManufacturedCase mp1 = manufactured_case("MP1");
    const double mu = 0.1;
    CHECK(mp1.parabolic);
    CHECK(mp1.problem.source_time_dependent);
    CHECK(mp1.problem.source(0.5, 0.5, 0.0) == doctest::Approx(-1.0 + 2.0 * mu * pi * pi + 1.0).epsilon(1e-12));
    CHECK(mp1.problem.source(0.5, 0.5, 1.0) == doctest::Approx((2.0 * mu * pi * pi) * std::exp(-1.0)).epsilon(1e-12));

    const ManufacturedCase me1 = manufactured_case("ME1");
    CHECK_FALSE(me1.parabolic);
    const double x = 0.3;
    const double y = 0.8;
    const double expected = (2.0 * mu * pi * pi + 1.0) * std::sin(pi * x) * std::sin(pi * y) +
                            pi * std::cos(pi * x) * std::sin(pi * y);
    CHECK(me1.problem.source(x, y, 0.0) == doctest::Approx(expected).epsilon(1e-12));
    CHECK(manufactured_case("ME0").problem.source(x, y, 0.0) == 0.0);
}

TEST_CASE("banded LU agrees with a dense solve") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> uniform(-1.0, 1.0);
    const std::size_t n = 25;
    const std::size_t kl = 3;
    const std::size_t ku = 2;
    SparseMatrix a;
    a.rows = n;
    Eigen::MatrixXd dense = Eigen::MatrixXd::Zero(n, n);
    a.row_start.push_back(0);
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t lo = i >= kl ? i - kl : 0;
        const std::size_t hi = std::min(n - 1, i + ku);
        for (std::size_t j = lo; j <= hi; ++j) {
            // Small diagonal forces row exchanges.
            const double v = j == i ? 0.05 * uniform(rng) : uniform(rng);
            a.col.push_back(j);
            a.value.push_back(v);
            dense(i, j) = v;
        }
        a.row_start.push_back(a.col.size());
    }
    std::vector<double> b(n);
    for (double& v : b) v = uniform(rng);
    const Eigen::VectorXd ref = dense.fullPivLu().solve(Eigen::Map<Eigen::VectorXd>(b.data(), n));
    const BandedLU lu(a, kl, ku);
    lu.solve(b);
    for (std::size_t i = 0; i < n; ++i) CHECK(b[i] == doctest::Approx(ref(i)).epsilon(1e-9));

    std::vector<double> y(n);
    std::vector<double> x(n, 1.0);
    a.multiply(x, y);
    CHECK(y[0] == doctest::Approx(dense.row(0).sum()));
    a.multiply_transpose(x, y);
    CHECK(y[n - 1] == doctest::Approx(dense.col(n - 1).sum()));
}

TEST_CASE("reference_parabolic") {
    SUBCASE("zero data stays zero") {
        ProblemSpec p = manufactured_case("ME0").problem;
        p.horizon = 0.25;
        const Trajectory traj = reference_parabolic(p, Grid2D(10), 0.5, 0.05);
        CHECK(traj.step_count == 5);
        for (const auto& u : traj.states) CHECK(discrete_l2_norm(u) == 0.0);
    }
    SUBCASE("MP1 time error halves with dt, solution is symmetric in y") {
        ManufacturedCase mc = manufactured_case("MP1");
        mc.problem.horizon = 0.5;
        const Grid2D grid(32);
        const Trajectory coarse = reference_parabolic(mc.problem, grid, 1.0, 1.0 / 32.0);
        const Trajectory fine = reference_parabolic(mc.problem, grid, 1.0, 1.0 / 64.0);
        const double ratio = final_error(mc, fine, grid) / final_error(mc, coarse, grid);
        CHECK(ratio > 0.4);
        CHECK(ratio < 0.65);
        const ScalarField& u = fine.states.back();
        const int n = grid.n();
        for (int iy = 0; iy < n; ++iy) {
            for (int ix = 0; ix < n; ++ix) CHECK(std::abs(u.at(ix, iy) - u.at(ix, n - 1 - iy)) <= 1e-12);
        }
    }
    SUBCASE("direct and iterative backends agree") {
        ManufacturedCase mc = manufactured_case("MP1");
        mc.problem.horizon = 0.25;
        const Grid2D grid(16);
        const Trajectory direct = reference_parabolic(mc.problem, grid, 0.5, 0.125, ReferenceMethod::Direct);
        const Trajectory iterative = reference_parabolic(mc.problem, grid, 0.5, 0.125, ReferenceMethod::Iterative);
        CHECK(max_abs_difference(direct.states.back(), iterative.states.back()) <= 1e-9);
    }
}

TEST_CASE("reference_elliptic") {
    CHECK(discrete_l2_norm(reference_elliptic(manufactured_case("ME0").problem, Grid2D(12))) == 0.0);

    const ManufacturedCase mc = manufactured_case("ME1");
    std::vector<double> errors;
    for (const int n : {16, 32, 64}) {
        const Grid2D grid(n);
        const ScalarField u = reference_elliptic(mc.problem, grid);
        errors.push_back(discrete_l2_norm(u - sample_exact(mc, grid)));
        if (n == 64) CHECK(elliptic_residual(mc.problem, u) <= 1e-10);
    }
    for (std::size_t k = 0; k + 1 < errors.size(); ++k) {
        const double ratio = errors[k] / errors[k + 1];
        CHECK(ratio > 3.0);
        CHECK(ratio < 5.0);
    }

    const Grid2D grid(8);
    const Eigen::VectorXd dense = dense_full_operator(mc.problem, grid)
                                      .partialPivLu()
                                      .solve(to_vector(sample_source(mc.problem, grid)));
    CHECK(max_abs_difference(reference_elliptic(mc.problem, grid, ReferenceMethod::Direct), to_field(grid, dense)) <=
          1e-10);
    CHECK(max_abs_difference(reference_elliptic(mc.problem, grid, ReferenceMethod::Iterative), to_field(grid, dense)) <=
          1e-9);
}

TEST_CASE("splitting gap to the unsplit scheme is first order in dt") {
    ManufacturedCase mc = manufactured_case("MP1");
    mc.problem.horizon = 0.5;
    const Grid2D grid(32);
    std::vector<double> gaps;
    for (const double dt : {1.0 / 8.0, 1.0 / 16.0, 1.0 / 32.0}) {
        const Trajectory split = solve_parabolic(mc.problem, grid, 1.0, dt);
        const Trajectory full = reference_parabolic(mc.problem, grid, 1.0, dt);
        gaps.push_back(discrete_l2_norm(split.states.back() - full.states.back()));
    }
    for (std::size_t k = 0; k + 1 < gaps.size(); ++k) {
        const double ratio = gaps[k + 1] / gaps[k];
        CAPTURE(ratio);
        CHECK(ratio >= 0.3);
        CHECK(ratio <= 0.8);
    }
}
