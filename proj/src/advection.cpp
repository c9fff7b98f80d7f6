#include "adrsplit/advection.hpp"

#include "adrsplit/errors.hpp"
#include "adrsplit/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <sstream>
#include <unordered_map>

namespace adrsplit {

double norm(Vec2 v) { return std::hypot(v.x, v.y); }

bool is_axis_aligned(const AdvectionField& field, const Grid2D& grid) {
    for (int iy = 0; iy < grid.n(); ++iy) {
        for (int ix = 0; ix < grid.n(); ++ix) {
            if (field(grid.coord(ix), grid.coord(iy)).y != 0.0) {
                return false;
            }
        }
    }
    return true;
}

std::string to_string(Verdict verdict) {
    switch (verdict) {
    case Verdict::Pass:
        return "pass";
    case Verdict::Warn:
        return "warn";
    case Verdict::Fail:
        return "fail";
    }
    return "unknown";
}

namespace {

struct TraceResult {
    double max_increase = 0.0;
    bool closed = false;
    bool exited = false;
};

bool inside(double x, double y) { return x >= 0.0 && x <= 1.0 && y >= 0.0 && y <= 1.0; }

// Unit tangent of the streamline; evaluation is clamped to the closed square.
std::optional<Vec2> direction(const AdvectionField& field, double x, double y, double tiny) {
    const Vec2 b = field(std::clamp(x, 0.0, 1.0), std::clamp(y, 0.0, 1.0));
    const double speed = norm(b);
    if (!(speed > tiny)) {
        return std::nullopt;
    }
    return Vec2{b.x / speed, b.y / speed};
}

// Spatial hash of visited points keyed by cells of size h/2.
class VisitedPoints {
public:
    explicit VisitedPoints(double cell) : cell_(cell) {}

    void add(Vec2 p, long step) { cells_[key(cell_of(p.x), cell_of(p.y))].push_back({p, step}); }

    bool returns_near(Vec2 p, long before_step, double radius) const {
        const long cx = cell_of(p.x);
        const long cy = cell_of(p.y);
        for (long dx = -1; dx <= 1; ++dx) {
            for (long dy = -1; dy <= 1; ++dy) {
                const auto it = cells_.find(key(cx + dx, cy + dy));
                if (it == cells_.end()) {
                    continue;
                }
                for (const auto& [q, step] : it->second) {
                    if (step <= before_step && std::hypot(p.x - q.x, p.y - q.y) < radius) {
                        return true;
                    }
                }
            }
        }
        return false;
    }

private:
    struct Entry {
        Vec2 point;
        long step;
    };

    long cell_of(double v) const { return static_cast<long>(std::floor(v / cell_)); }
    static std::uint64_t key(long cx, long cy) {
        return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(cx)) << 32) |
               static_cast<std::uint32_t>(cy);
    }

    double cell_;
    std::unordered_map<std::uint64_t, std::vector<Entry>> cells_;
};

TraceResult trace_streamline(const AdvectionField& field, Vec2 seed, double h, long budget,
                             double tiny) {
    constexpr long kMinSeparation = 8; // steps, i.e. 4h of arc length
    const double ds = 0.5 * h;
    const double radius = 0.5 * h;

    TraceResult result;
    VisitedPoints visited(radius);
    Vec2 p = seed;
    double min_speed = norm(field(p.x, p.y));
    visited.add(p, 0);

    for (long step = 1; step <= budget; ++step) {
        const auto k1 = direction(field, p.x, p.y, tiny);
        if (!k1) {
            return result;
        }
        const auto k2 = direction(field, p.x + 0.5 * ds * k1->x, p.y + 0.5 * ds * k1->y, tiny);
        if (!k2) {
            return result;
        }
        const auto k3 = direction(field, p.x + 0.5 * ds * k2->x, p.y + 0.5 * ds * k2->y, tiny);
        if (!k3) {
            return result;
        }
        const auto k4 = direction(field, p.x + ds * k3->x, p.y + ds * k3->y, tiny);
        if (!k4) {
            return result;
        }
        p.x += ds / 6.0 * (k1->x + 2.0 * k2->x + 2.0 * k3->x + k4->x);
        p.y += ds / 6.0 * (k1->y + 2.0 * k2->y + 2.0 * k3->y + k4->y);
        if (!inside(p.x, p.y)) {
            result.exited = true;
            return result;
        }

        const double speed = norm(field(p.x, p.y));
        result.max_increase = std::max(result.max_increase, speed - min_speed);
        min_speed = std::min(min_speed, speed);

        if (visited.returns_near(p, step - kMinSeparation, radius)) {
            result.closed = true;
            return result;
        }
        visited.add(p, step);
    }
    return result;
}

std::string format_value(double v) {
    std::ostringstream ss;
    ss.precision(6);
    ss << v;
    return ss.str();
}

} // namespace

FieldReport validate_advection(const AdvectionField& field, const Grid2D& grid, double mu,
                               std::optional<double> tol) {
    if (!field.beta) {
        throw InvalidArgument("advection field has no velocity function");
    }
    if (!(mu > 0.0)) {
        throw InvalidArgument("diffusion coefficient mu must be positive");
    }
    if (tol && !(*tol > 0.0)) {
        throw InvalidArgument("tolerance must be positive");
    }

    const int n = grid.n();
    const double h = grid.h();
    const double fd_tol = 10.0 * h * h;

    FieldReport report;
    report.analytic_divergence = static_cast<bool>(field.divergence);
    report.divergence_tolerance = tol.value_or(report.analytic_divergence ? 1e-8 : fd_tol);
    report.div_b_tolerance = tol.value_or(fd_tol);
    const double speed_tol = report.divergence_tolerance;

    // Pointwise samples.
    report.min_speed = std::numeric_limits<double>::infinity();
    report.axis_aligned = true;
    for (int iy = 0; iy < n; ++iy) {
        for (int ix = 0; ix < n; ++ix) {
            const Vec2 b = field(grid.coord(ix), grid.coord(iy));
            const double speed = norm(b);
            report.min_speed = std::min(report.min_speed, speed);
            report.max_speed = std::max(report.max_speed, speed);
            if (b.y != 0.0) {
                report.axis_aligned = false;
            }
        }
    }
    report.mesh_peclet = report.max_speed * h / (2.0 * mu);
    report.vanishing_speed = !(report.min_speed >= speed_tol);

    // Divergences at interior nodes. The field is a callable, so the
    // difference step can be far below h; grid-spaced differences blow up
    // near singular points of beta/|beta| such as a rotation centre.
    const double d = 1e-3 * h;
    report.max_abs_div_beta = 0.0;
    report.min_div_b = std::numeric_limits<double>::infinity();
    bool div_b_defined = true;
    for (int iy = 0; iy < n; ++iy) {
        for (int ix = 0; ix < n; ++ix) {
            const double x = grid.coord(ix);
            const double y = grid.coord(iy);
            const Vec2 e = field(x + d, y);
            const Vec2 w = field(x - d, y);
            const Vec2 no = field(x, y + d);
            const Vec2 so = field(x, y - d);
            const double div_beta = field.divergence
                                        ? field.divergence(x, y)
                                        : (e.x - w.x) / (2.0 * d) + (no.y - so.y) / (2.0 * d);
            report.max_abs_div_beta = std::max(report.max_abs_div_beta, std::abs(div_beta));

            const double se = norm(e);
            const double sw = norm(w);
            const double sn = norm(no);
            const double ss = norm(so);
            if (!(se > 0.0 && sw > 0.0 && sn > 0.0 && ss > 0.0)) {
                div_b_defined = false;
                continue;
            }
            const double div_b = (e.x / se - w.x / sw) / (2.0 * d) + (no.y / sn - so.y / ss) / (2.0 * d);
            report.min_div_b = std::min(report.min_div_b, div_b);
        }
    }
    if (!div_b_defined || report.vanishing_speed) {
        report.min_div_b = std::numeric_limits<double>::quiet_NaN();
    }

    // Streamlines.
    if (!report.vanishing_speed) {
        const int m = (n + 3) / 4;
        const long budget = 10L * (n + 1) * (n + 1);
        std::vector<TraceResult> traces(static_cast<std::size_t>(m) * m);
        const double tiny = 1e-300;
        parallel_for(traces.size(), [&](std::size_t k) {
            const int a = static_cast<int>(k % m);
            const int b = static_cast<int>(k / m);
            const Vec2 seed{(a + 0.5) / m, (b + 0.5) / m};
            traces[k] = trace_streamline(field, seed, h, budget, tiny);
        });
        report.traces = static_cast<int>(traces.size());
        for (const auto& t : traces) {
            report.max_streamline_increase = std::max(report.max_streamline_increase, t.max_increase);
            report.closed_curve_detected = report.closed_curve_detected || t.closed;
            report.traces_exited += t.exited ? 1 : 0;
        }
    }

    // Verdict.
    bool fail = false;
    if (report.vanishing_speed) {
        fail = true;
        report.diagnostics.push_back("advection speed vanishes: min |beta| = " +
                                     format_value(report.min_speed));
    }
    if (report.closed_curve_detected) {
        fail = true;
        report.diagnostics.push_back(
            "closed streamline detected inside the domain; beta must not have closed integral curves");
    }
    if (report.max_abs_div_beta > report.divergence_tolerance) {
        fail = true;
        report.diagnostics.push_back("flow is not incompressible: max |div beta| = " +
                                     format_value(report.max_abs_div_beta));
    }
    if (report.min_div_b < -report.div_b_tolerance) {
        fail = true;
        report.diagnostics.push_back("div(beta/|beta|) >= 0 violated: min = " +
                                     format_value(report.min_div_b));
    }
    if (report.min_div_b >= -report.div_b_tolerance &&
        report.max_streamline_increase > report.div_b_tolerance) {
        report.diagnostics.push_back("|beta| increases along a streamline by " +
                                     format_value(report.max_streamline_increase) +
                                     " although div(beta/|beta|) >= 0 on the samples");
    }
    bool warn = false;
    if (report.mesh_peclet > 1.0) {
        warn = true;
        report.diagnostics.push_back("mesh Peclet number " + format_value(report.mesh_peclet) +
                                     " exceeds 1; centered advection may oscillate");
    }
    if (!report.axis_aligned) {
        warn = true;
        report.diagnostics.push_back("beta is not axis-aligned; the split stepper needs beta = (beta(x,y), 0)");
    }
    report.verdict = fail ? Verdict::Fail : (warn ? Verdict::Warn : Verdict::Pass);
    return report;
}

} // namespace adrsplit
