#include "adrsplit/tridiagonal.hpp"

#include "adrsplit/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace adrsplit {

LineOperator LineOperator::identity(std::size_t n) {
    LineOperator op;
    op.lower.assign(n > 0 ? n - 1 : 0, 0.0);
    op.diag.assign(n, 1.0);
    op.upper.assign(n > 0 ? n - 1 : 0, 0.0);
    return op;
}

void LineOperator::validate() const {
    const std::size_t n = diag.size();
    if (n == 0 || lower.size() != n - 1 || upper.size() != n - 1) {
        throw InvalidArgument("tridiagonal bands must have lengths n-1, n, n-1");
    }
    auto finite = [](double v) { return std::isfinite(v); };
    if (!std::all_of(lower.begin(), lower.end(), finite) ||
        !std::all_of(diag.begin(), diag.end(), finite) ||
        !std::all_of(upper.begin(), upper.end(), finite)) {
        throw InvalidArgument("tridiagonal entries must be finite");
    }
}

LineOperator LineOperator::transposed() const { return LineOperator{upper, diag, lower}; }

double LineOperator::norm_inf() const {
    double worst = 0.0;
    const std::size_t n = diag.size();
    for (std::size_t i = 0; i < n; ++i) {
        double row = std::abs(diag[i]);
        if (i > 0) {
            row += std::abs(lower[i - 1]);
        }
        if (i + 1 < n) {
            row += std::abs(upper[i]);
        }
        worst = std::max(worst, row);
    }
    return worst;
}

void line_apply(const LineOperator& op, std::span<const double> x, std::span<double> y) {
    const std::size_t n = op.diag.size();
    if (x.size() != n || y.size() != n) {
        throw InvalidArgument("line_apply: vector length " + std::to_string(x.size()) +
                              " does not match operator size " + std::to_string(n));
    }
    if (n == 1) {
        y[0] = op.diag[0] * x[0];
        return;
    }
    y[0] = op.diag[0] * x[0] + op.upper[0] * x[1];
    for (std::size_t i = 1; i + 1 < n; ++i) {
        y[i] = op.lower[i - 1] * x[i - 1] + op.diag[i] * x[i] + op.upper[i] * x[i + 1];
    }
    y[n - 1] = op.lower[n - 2] * x[n - 2] + op.diag[n - 1] * x[n - 1];
}

std::vector<double> line_apply(const LineOperator& op, std::span<const double> x) {
    std::vector<double> y(op.diag.size());
    line_apply(op, x, y);
    return y;
}

void line_solve(const LineOperator& op, std::span<const double> rhs, std::span<double> x,
                std::span<double> work) {
    const std::size_t n = op.diag.size();
    if (rhs.size() != n || x.size() != n || work.size() < n) {
        throw InvalidArgument("line_solve: vector length " + std::to_string(rhs.size()) +
                              " does not match operator size " + std::to_string(n));
    }
    const double threshold = 64.0 * std::numeric_limits<double>::epsilon() * op.norm_inf();
    auto pivot_ok = [threshold](double p) { return std::abs(p) > threshold && std::isfinite(p); };

    // Forward sweep: work holds the modified super-diagonal, x the modified rhs.
    double pivot = op.diag[0];
    if (!pivot_ok(pivot)) {
        throw SingularSystemError("zero pivot in row 0 of tridiagonal solve");
    }
    work[0] = n > 1 ? op.upper[0] / pivot : 0.0;
    x[0] = rhs[0] / pivot;
    for (std::size_t i = 1; i < n; ++i) {
        pivot = op.diag[i] - op.lower[i - 1] * work[i - 1];
        if (!pivot_ok(pivot)) {
            throw SingularSystemError("zero pivot in row " + std::to_string(i) +
                                      " of tridiagonal solve");
        }
        work[i] = i + 1 < n ? op.upper[i] / pivot : 0.0;
        x[i] = (rhs[i] - op.lower[i - 1] * x[i - 1]) / pivot;
    }
    for (std::size_t i = n - 1; i-- > 0;) {
        x[i] -= work[i] * x[i + 1];
    }
}

std::vector<double> line_solve(const LineOperator& op, std::span<const double> rhs) {
    std::vector<double> x(op.diag.size());
    std::vector<double> work(op.diag.size());
    line_solve(op, rhs, x, work);
    return x;
}

void check_factorizable(const LineOperator& op) {
    op.validate();
    std::vector<double> zero(op.size(), 0.0);
    (void)line_solve(op, zero);
}

} // namespace adrsplit
