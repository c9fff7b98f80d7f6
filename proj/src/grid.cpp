#include "adrsplit/grid.hpp"

#include "adrsplit/errors.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <map>
#include <sstream>
#include <utility>

namespace adrsplit {

Grid2D::Grid2D(int n) : n_(n), h_(1.0 / (n + 1)) {
    if (n < 2) {
        throw InvalidArgument("grid needs at least 2 interior nodes per axis, got " +
                              std::to_string(n));
    }
}

Grid2D make_grid(int n) { return Grid2D(n); }

ScalarField::ScalarField(Grid2D grid) : grid_(grid), values_(grid.size(), 0.0) {}

ScalarField::ScalarField(Grid2D grid, std::vector<double> values)
    : grid_(grid), values_(std::move(values)) {
    if (values_.size() != grid_.size()) {
        throw InvalidArgument("field has " + std::to_string(values_.size()) +
                              " values, grid expects " + std::to_string(grid_.size()));
    }
    if (!all_finite()) {
        throw InvalidArgument("field values must be finite");
    }
}

bool ScalarField::all_finite() const {
    return std::all_of(values_.begin(), values_.end(), [](double v) { return std::isfinite(v); });
}

ScalarField& ScalarField::operator+=(const ScalarField& other) {
    require_same_grid(*this, other, "field addition");
    for (std::size_t k = 0; k < values_.size(); ++k) {
        values_[k] += other.values_[k];
    }
    return *this;
}

ScalarField& ScalarField::operator-=(const ScalarField& other) {
    require_same_grid(*this, other, "field subtraction");
    for (std::size_t k = 0; k < values_.size(); ++k) {
        values_[k] -= other.values_[k];
    }
    return *this;
}

ScalarField& ScalarField::operator*=(double factor) {
    for (double& v : values_) {
        v *= factor;
    }
    return *this;
}

ScalarField operator+(ScalarField lhs, const ScalarField& rhs) { return lhs += rhs; }
ScalarField operator-(ScalarField lhs, const ScalarField& rhs) { return lhs -= rhs; }
ScalarField operator*(double factor, ScalarField field) { return field *= factor; }

ScalarField sample(const Grid2D& grid, const std::function<double(double, double)>& fn) {
    ScalarField out(grid);
    for (int iy = 0; iy < grid.n(); ++iy) {
        for (int ix = 0; ix < grid.n(); ++ix) {
            out.at(ix, iy) = fn(grid.coord(ix), grid.coord(iy));
        }
    }
    return out;
}

double discrete_l2_norm(const ScalarField& u) {
    return std::sqrt(std::max(0.0, discrete_inner(u, u)));
}

double discrete_inner(const ScalarField& u, const ScalarField& v) {
    require_same_grid(u, v, "inner product");
    double sum = 0.0;
    for (std::size_t k = 0; k < u.values().size(); ++k) {
        sum += u.values()[k] * v.values()[k];
    }
    const double h = u.grid().h();
    return h * h * sum;
}

double max_abs_difference(const ScalarField& u, const ScalarField& v) {
    require_same_grid(u, v, "difference");
    double worst = 0.0;
    for (std::size_t k = 0; k < u.values().size(); ++k) {
        worst = std::max(worst, std::abs(u.values()[k] - v.values()[k]));
    }
    return worst;
}

void require_same_grid(const ScalarField& a, const ScalarField& b, const char* what) {
    if (a.grid() != b.grid()) {
        throw InvalidArgument(std::string(what) + ": fields live on different grids");
    }
}

void write_field_csv(std::ostream& out, const ScalarField& u) {
    out << "i,j,value\n";
    out << std::setprecision(std::numeric_limits<double>::max_digits10);
    for (int ix = 0; ix < u.n(); ++ix) {
        for (int iy = 0; iy < u.n(); ++iy) {
            out << ix + 1 << ',' << iy + 1 << ',' << u.at(ix, iy) << '\n';
        }
    }
}

void write_field_csv(const std::string& path, const ScalarField& u) {
    std::ofstream out(path);
    if (!out) {
        throw std::runtime_error("cannot open " + path + " for writing");
    }
    write_field_csv(out, u);
}

ScalarField read_field_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line) || line != "i,j,value") {
        throw InvalidArgument("field CSV must start with header 'i,j,value'");
    }
    std::map<std::pair<int, int>, double> entries;
    int max_index = 0;
    int line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) {
            continue;
        }
        std::istringstream ss(line);
        int i = 0;
        int j = 0;
        double value = 0.0;
        char c1 = 0;
        char c2 = 0;
        if (!(ss >> i >> c1 >> j >> c2 >> value) || c1 != ',' || c2 != ',' || i < 1 || j < 1) {
            throw InvalidArgument("malformed field CSV record on line " + std::to_string(line_no));
        }
        if (!entries.emplace(std::make_pair(i, j), value).second) {
            throw InvalidArgument("duplicate node on line " + std::to_string(line_no));
        }
        max_index = std::max({max_index, i, j});
    }
    const Grid2D grid(max_index);
    if (entries.size() != grid.size()) {
        throw InvalidArgument("field CSV holds " + std::to_string(entries.size()) +
                              " nodes, expected " + std::to_string(grid.size()));
    }
    std::vector<double> values(grid.size());
    for (const auto& [key, value] : entries) {
        values[static_cast<std::size_t>(key.second - 1) * grid.n() + (key.first - 1)] = value;
    }
    return ScalarField(grid, std::move(values));
}

ScalarField read_field_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot open " + path);
    }
    return read_field_csv(in);
}

} // namespace adrsplit
