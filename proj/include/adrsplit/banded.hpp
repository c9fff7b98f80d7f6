#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace adrsplit {

/// Compressed sparse rows, just enough for the unsplit reference systems.
struct SparseMatrix {
    std::size_t rows = 0;
    std::vector<std::size_t> row_start;
    std::vector<std::size_t> col;
    std::vector<double> value;

    void multiply(std::span<const double> x, std::span<double> y) const;
    void multiply_transpose(std::span<const double> x, std::span<double> y) const;
};

/// LU factorization with partial pivoting of a banded matrix with kl
/// sub-diagonals and ku super-diagonals. Fill-in widens the upper band to
/// ku + kl.
class BandedLU {
public:
    BandedLU(const SparseMatrix& matrix, std::size_t kl, std::size_t ku);

    /// Overwrites b with the solution.
    void solve(std::span<double> b) const;

private:
    double& at(std::size_t i, std::size_t j) { return band_[i * width_ + (j + kl_ - i)]; }
    double at(std::size_t i, std::size_t j) const { return band_[i * width_ + (j + kl_ - i)]; }

    std::size_t n_;
    std::size_t kl_;
    std::size_t ku_;
    std::size_t width_;
    std::vector<double> band_;
    std::vector<std::size_t> pivot_;
};

} // namespace adrsplit
