#pragma once

#include "adrsplit/grid.hpp"
#include "adrsplit/problem.hpp"
#include "adrsplit/tridiagonal.hpp"

#include <cstdint>
#include <vector>

namespace adrsplit {

/// Per-line operators of one split time step.
///
/// Row iy (a horizontal line) carries the streamwise operators
///   B(c) = I + c (-mu Dxx + beta(x, y_iy) Dx + sigma I)
/// and column ix the cross-stream operators
///   R(c) = I + c (-mu Dyy)
/// with Dxx = (1, -2, 1)/h^2, Dx = (-1, 0, 1)/(2h), homogeneous Dirichlet ends.
/// The implicit operators use c = theta dt, the explicit ones c = (theta-1) dt.
class SplitOperators {
public:
    const Grid2D& grid() const noexcept { return grid_; }
    double theta() const noexcept { return theta_; }
    double dt() const noexcept { return dt_; }
    double mu() const noexcept { return mu_; }
    double sigma() const noexcept { return sigma_; }

    const std::vector<LineOperator>& rows_B_theta() const noexcept { return rows_B_theta_; }
    const std::vector<LineOperator>& rows_B_thetam1() const noexcept { return rows_B_thetam1_; }
    const std::vector<LineOperator>& cols_R_theta() const noexcept { return cols_R_theta_; }
    const std::vector<LineOperator>& cols_R_thetam1() const noexcept { return cols_R_thetam1_; }

private:
    friend SplitOperators assemble_split_operators(const ProblemSpec&, const Grid2D&, double, double);

    Grid2D grid_;
    double theta_ = 1.0;
    double dt_ = 0.0;
    double mu_ = 0.0;
    double sigma_ = 0.0;
    std::vector<LineOperator> rows_B_theta_;
    std::vector<LineOperator> rows_B_thetam1_;
    std::vector<LineOperator> cols_R_theta_;
    std::vector<LineOperator> cols_R_thetam1_;
};

/// Requires beta = (beta(x, y), 0) on the grid, theta in (0, 1], dt > 0 and
/// mu, sigma > 0. Every implicit line is checked for usable pivots.
SplitOperators assemble_split_operators(const ProblemSpec& problem, const Grid2D& grid, double theta,
                                        double dt);

/// I*identity_weight + scale*(-mu Dxx + beta_i Dx + sigma I) for one row.
LineOperator streamwise_line(std::span<const double> beta, double mu, double sigma, double h,
                             double scale, double identity_weight);
/// I + scale*(-mu Dyy) for one column of n nodes.
LineOperator cross_stream_line(int n, double mu, double h, double scale);

// Line sweeps over a field. Rows and columns are independent and may be
// processed by several workers; each writes only its own line.
ScalarField apply_rows(const std::vector<LineOperator>& rows, const ScalarField& u, bool transpose = false);
ScalarField solve_rows(const std::vector<LineOperator>& rows, const ScalarField& rhs, bool transpose = false);
ScalarField apply_cols(const std::vector<LineOperator>& cols, const ScalarField& u, bool transpose = false);
ScalarField solve_cols(const std::vector<LineOperator>& cols, const ScalarField& rhs, bool transpose = false);

/// T u = R_theta^{-1} R_{theta-1} B_theta^{-1} B_{theta-1} u.
ScalarField apply_T(const SplitOperators& ops, const ScalarField& u);
/// T^T u = B_{theta-1}^T B_theta^{-T} R_{theta-1}^T R_theta^{-T} u.
ScalarField apply_T_adjoint(const SplitOperators& ops, const ScalarField& u);

/// Unsplit five-point operator A_h u = -mu Lap_h u + beta . grad_h u + sigma u.
ScalarField apply_full_operator(const ProblemSpec& problem, const ScalarField& u);

struct NormEstimate {
    double value = 0.0;
    int iterations = 0;
    bool converged = false;
    /// Relative change of the Rayleigh quotient at the last iteration.
    double residual = 0.0;
};

/// Power iteration on T^T T from a seeded pseudo-random start. value is the
/// square root of the final Rayleigh quotient. The h^2 weight of the discrete
/// L2 norm is uniform, so the Euclidean iteration yields the same norm.
NormEstimate estimate_operator_norm(const SplitOperators& ops, double tol = 1e-10, int max_iter = 10000,
                                    std::uint64_t seed = 42);

} // namespace adrsplit
