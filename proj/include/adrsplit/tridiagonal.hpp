#pragma once

#include <span>
#include <vector>

namespace adrsplit {

/// Tridiagonal operator acting on the n unknowns of one grid line.
///
/// lower[k] multiplies x[k] in row k+1, upper[k] multiplies x[k+1] in row k.
struct LineOperator {
    std::vector<double> lower;
    std::vector<double> diag;
    std::vector<double> upper;

    std::size_t size() const noexcept { return diag.size(); }

    static LineOperator identity(std::size_t n);

    /// Throws InvalidArgument unless bands have lengths n-1, n, n-1 and are finite.
    void validate() const;
    LineOperator transposed() const;
    /// Max absolute row sum.
    double norm_inf() const;

    friend bool operator==(const LineOperator&, const LineOperator&) = default;
};

/// y = op * x. Throws InvalidArgument on length mismatch.
void line_apply(const LineOperator& op, std::span<const double> x, std::span<double> y);
std::vector<double> line_apply(const LineOperator& op, std::span<const double> x);

/// Solves op * x = rhs by Thomas elimination without pivoting. `work` must
/// hold n doubles. Throws SingularSystemError when a pivot is zero or below
/// 64 eps ||op||_inf.
void line_solve(const LineOperator& op, std::span<const double> rhs, std::span<double> x,
                std::span<double> work);
std::vector<double> line_solve(const LineOperator& op, std::span<const double> rhs);

/// Runs the elimination on a zero right-hand side to confirm every pivot is usable.
void check_factorizable(const LineOperator& op);

} // namespace adrsplit
