#pragma once

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace adrsplit {

/// Uniform tensor grid on the unit square with n interior nodes per axis.
///
/// Interior node (i, j), 1 <= i, j <= n, sits at (i*h, j*h) with h = 1/(n+1).
/// Boundary values are identically zero and never stored.
class Grid2D {
public:
    Grid2D() = default;
    explicit Grid2D(int n);

    int n() const noexcept { return n_; }
    double h() const noexcept { return h_; }
    /// Vertical extent of the domain.
    double extent() const noexcept { return 1.0; }
    std::size_t size() const noexcept { return static_cast<std::size_t>(n_) * n_; }

    /// Coordinate of the zero-based interior index k (node k+1).
    double coord(int k) const noexcept { return (k + 1) * h_; }

    friend bool operator==(const Grid2D&, const Grid2D&) = default;

private:
    int n_ = 0;
    double h_ = 0.0;
};

Grid2D make_grid(int n);

/// Nodal values on the interior of a Grid2D.
///
/// Storage is row by row: a row is a horizontal grid line (fixed y), so the
/// x-direction is contiguous. Indices are zero-based, ix for x and iy for y.
class ScalarField {
public:
    ScalarField() = default;
    explicit ScalarField(Grid2D grid);
    ScalarField(Grid2D grid, std::vector<double> values);

    const Grid2D& grid() const noexcept { return grid_; }
    int n() const noexcept { return grid_.n(); }

    double& at(int ix, int iy) { return values_[index(ix, iy)]; }
    double at(int ix, int iy) const { return values_[index(ix, iy)]; }

    std::span<double> row(int iy) {
        return {values_.data() + static_cast<std::size_t>(iy) * grid_.n(),
                static_cast<std::size_t>(grid_.n())};
    }
    std::span<const double> row(int iy) const {
        return {values_.data() + static_cast<std::size_t>(iy) * grid_.n(),
                static_cast<std::size_t>(grid_.n())};
    }

    std::vector<double>& values() noexcept { return values_; }
    const std::vector<double>& values() const noexcept { return values_; }

    bool all_finite() const;

    ScalarField& operator+=(const ScalarField& other);
    ScalarField& operator-=(const ScalarField& other);
    ScalarField& operator*=(double factor);

private:
    std::size_t index(int ix, int iy) const noexcept {
        return static_cast<std::size_t>(iy) * grid_.n() + ix;
    }

    Grid2D grid_;
    std::vector<double> values_;
};

ScalarField operator+(ScalarField lhs, const ScalarField& rhs);
ScalarField operator-(ScalarField lhs, const ScalarField& rhs);
ScalarField operator*(double factor, ScalarField field);

/// Samples fn(x, y) at every interior node.
ScalarField sample(const Grid2D& grid, const std::function<double(double, double)>& fn);

/// sqrt(h^2 * sum of squared nodal values).
double discrete_l2_norm(const ScalarField& u);
/// h^2-weighted inner product.
double discrete_inner(const ScalarField& u, const ScalarField& v);
double max_abs_difference(const ScalarField& u, const ScalarField& v);

void require_same_grid(const ScalarField& a, const ScalarField& b, const char* what);

// CSV with header `i,j,value`, one record per interior node, 1-based indices,
// ordered with i (x-index) outermost and j (y-index) innermost.
void write_field_csv(std::ostream& out, const ScalarField& u);
void write_field_csv(const std::string& path, const ScalarField& u);
ScalarField read_field_csv(std::istream& in);
ScalarField read_field_csv(const std::string& path);

} // namespace adrsplit
