#pragma once

#include "adrsplit/grid.hpp"

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace adrsplit {

struct Vec2 {
    double x = 0.0;
    double y = 0.0;
};

double norm(Vec2 v);

/// Advection velocity beta(x, y), optionally with its analytic divergence.
struct AdvectionField {
    std::function<Vec2(double, double)> beta;
    /// Analytic div(beta); empty when unknown.
    std::function<double(double, double)> divergence;
    std::string label;

    Vec2 operator()(double x, double y) const { return beta(x, y); }
};

/// True when beta_y vanishes at every interior node.
bool is_axis_aligned(const AdvectionField& field, const Grid2D& grid);

enum class Verdict { Pass, Warn, Fail };
std::string to_string(Verdict verdict);

struct FieldReport {
    double min_speed = 0.0;
    double max_speed = 0.0;
    double max_abs_div_beta = 0.0;
    double min_div_b = 0.0;
    /// Largest rise of |beta| along any traced streamline (later minus earlier).
    double max_streamline_increase = 0.0;
    bool closed_curve_detected = false;
    double mesh_peclet = 0.0;
    bool axis_aligned = false;
    bool vanishing_speed = false;
    bool analytic_divergence = false;
    // Thresholds actually applied.
    double divergence_tolerance = 0.0;
    double div_b_tolerance = 0.0;
    int traces = 0;
    int traces_exited = 0;
    Verdict verdict = Verdict::Pass;
    std::vector<std::string> diagnostics;
};

/// Checks the hypotheses the splitting scheme's stability analysis relies on:
/// incompressibility, div(beta/|beta|) >= 0, |beta| non-increasing along
/// streamlines, no closed streamlines inside the closed square.
///
/// Divergences are evaluated at interior nodes: div(beta) analytically when
/// the field supplies it, otherwise by centered differences; div(b) always by
/// centered differences. The difference step is h/1000, not h. Streamlines are traced with classical RK4 in arc
/// length (step h/2) from the midpoints of a ceil(n/4) x ceil(n/4) lattice of
/// cells, for at most 10 (n+1)^2 steps. A trace that comes back within h/2 of
/// a point it visited earlier, without leaving the square, counts as closed.
///
/// When tol is empty the defaults are 1e-8 for an analytic div(beta) and
/// 10 h^2 for finite-difference quantities. An explicit tol is used for all
/// checks.
FieldReport validate_advection(const AdvectionField& field, const Grid2D& grid, double mu,
                               std::optional<double> tol = std::nullopt);

} // namespace adrsplit
