#pragma once

#include "adrsplit/advection.hpp"
#include "adrsplit/problem.hpp"

#include <string>
#include <vector>

namespace adrsplit {

/// A parsed `name(arg, ...)` term from the config vocabulary.
struct NamedExpression {
    std::string name;
    std::vector<double> args;
};

NamedExpression parse_named_expression(const std::string& text);

/// Advection fields:
///   constant-x(b0)       (b0, 0)
///   constant(bx, by)     (bx, by)
///   shear(a, b)          (a + b y, 0)
///   ramp-x(a, b)         (a + b x, 0)            div = b
///   stagnation(a)        a (x + 1, -y)
///   decelerating(a)      a (1 - x/2, y/2)
///   rotation(w)          w (y - 1/2, -(x - 1/2))  closed orbits about the centre
///   corner-rotation(w)   w (y, -x)
AdvectionField make_advection(const std::string& text);

/// Scalar functions of (x, y):
///   zero, constant(c), sin-product(a), sin-mode(a, k, l), gaussian(a, x0, y0, w)
SpaceFunction make_scalar(const std::string& text);

} // namespace adrsplit
