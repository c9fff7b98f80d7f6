#include "adrsplit/banded.hpp"

#include "adrsplit/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace adrsplit {

void SparseMatrix::multiply(std::span<const double> x, std::span<double> y) const {
    for (std::size_t i = 0; i < rows; ++i) {
        double sum = 0.0;
        for (std::size_t k = row_start[i]; k < row_start[i + 1]; ++k) {
            sum += value[k] * x[col[k]];
        }
        y[i] = sum;
    }
}

void SparseMatrix::multiply_transpose(std::span<const double> x, std::span<double> y) const {
    std::fill(y.begin(), y.end(), 0.0);
    for (std::size_t i = 0; i < rows; ++i) {
        for (std::size_t k = row_start[i]; k < row_start[i + 1]; ++k) {
            y[col[k]] += value[k] * x[i];
        }
    }
}

BandedLU::BandedLU(const SparseMatrix& matrix, std::size_t kl, std::size_t ku)
    : n_(matrix.rows), kl_(kl), ku_(ku), width_(2 * kl + ku + 1), band_(n_ * width_, 0.0), pivot_(n_) {
    double scale = 0.0;
    for (std::size_t i = 0; i < n_; ++i) {
        double row_sum = 0.0;
        for (std::size_t k = matrix.row_start[i]; k < matrix.row_start[i + 1]; ++k) {
            const std::size_t j = matrix.col[k];
            if (j + kl_ < i || j > i + ku_) {
                throw InvalidArgument("matrix entry lies outside the declared band");
            }
            at(i, j) += matrix.value[k];
            row_sum += std::abs(matrix.value[k]);
        }
        scale = std::max(scale, row_sum);
    }
    const double threshold = 64.0 * std::numeric_limits<double>::epsilon() * scale;

    for (std::size_t k = 0; k < n_; ++k) {
        const std::size_t last_row = std::min(n_ - 1, k + kl_);
        const std::size_t last_col = std::min(n_ - 1, k + ku_ + kl_);
        std::size_t p = k;
        for (std::size_t i = k + 1; i <= last_row; ++i) {
            if (std::abs(at(i, k)) > std::abs(at(p, k))) {
                p = i;
            }
        }
        if (!(std::abs(at(p, k)) > threshold)) {
            throw SingularSystemError("zero pivot in column " + std::to_string(k) + " of banded solve");
        }
        pivot_[k] = p;
        if (p != k) {
            for (std::size_t j = k; j <= last_col; ++j) {
                std::swap(at(k, j), at(p, j));
            }
        }
        const double diag = at(k, k);
        for (std::size_t i = k + 1; i <= last_row; ++i) {
            const double l = at(i, k) / diag;
            at(i, k) = l;
            if (l == 0.0) {
                continue;
            }
            for (std::size_t j = k + 1; j <= last_col; ++j) {
                at(i, j) -= l * at(k, j);
            }
        }
    }
}

void BandedLU::solve(std::span<double> b) const {
    if (b.size() != n_) {
        throw InvalidArgument("banded solve: right-hand side has wrong length");
    }
    for (std::size_t k = 0; k < n_; ++k) {
        std::swap(b[k], b[pivot_[k]]);
        const std::size_t last_row = std::min(n_ - 1, k + kl_);
        for (std::size_t i = k + 1; i <= last_row; ++i) {
            b[i] -= at(i, k) * b[k];
        }
    }
    for (std::size_t k = n_; k-- > 0;) {
        const std::size_t last_col = std::min(n_ - 1, k + ku_ + kl_);
        double sum = b[k];
        for (std::size_t j = k + 1; j <= last_col; ++j) {
            sum -= at(k, j) * b[j];
        }
        b[k] = sum / at(k, k);
    }
}

} // namespace adrsplit
