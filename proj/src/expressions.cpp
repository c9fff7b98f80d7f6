#include "adrsplit/expressions.hpp"

#include "adrsplit/errors.hpp"

#include <cmath>
#include <numbers>
#include <regex>

namespace adrsplit {

namespace {

void require_arity(const NamedExpression& e, std::size_t count) {
    if (e.args.size() != count) {
        throw InvalidArgument("'" + e.name + "' takes " + std::to_string(count) + " argument(s), got " +
                              std::to_string(e.args.size()));
    }
}

double zero_divergence(double, double) { return 0.0; }

} // namespace

NamedExpression parse_named_expression(const std::string& text) {
    static const std::regex form(R"(^\s*([a-z][a-z0-9-]*)\s*(?:\((.*)\))?\s*$)");
    std::smatch match;
    if (!std::regex_match(text, match, form)) {
        throw InvalidArgument("cannot parse expression '" + text + "'");
    }
    NamedExpression out;
    out.name = match[1].str();
    if (match[2].matched) {
        const std::string body = match[2].str();
        static const std::regex sep(R"(\s*,\s*)");
        std::sregex_token_iterator it(body.begin(), body.end(), sep, -1);
        for (; it != std::sregex_token_iterator(); ++it) {
            std::string token = it->str();
            const auto first = token.find_first_not_of(" \t");
            const auto last = token.find_last_not_of(" \t");
            if (first == std::string::npos) {
                throw InvalidArgument("empty argument in '" + text + "'");
            }
            token = token.substr(first, last - first + 1);
            std::size_t used = 0;
            double value = 0.0;
            try {
                value = std::stod(token, &used);
            } catch (const std::exception&) {
                used = 0;
            }
            if (used != token.size() || !std::isfinite(value)) {
                throw InvalidArgument("argument '" + token + "' in '" + text + "' is not a number");
            }
            out.args.push_back(value);
        }
    }
    return out;
}

AdvectionField make_advection(const std::string& text) {
    const NamedExpression e = parse_named_expression(text);
    AdvectionField field;
    field.label = text;
    field.divergence = zero_divergence;
    if (e.name == "constant-x") {
        require_arity(e, 1);
        const double b0 = e.args[0];
        field.beta = [b0](double, double) { return Vec2{b0, 0.0}; };
    } else if (e.name == "constant") {
        require_arity(e, 2);
        const double bx = e.args[0];
        const double by = e.args[1];
        field.beta = [bx, by](double, double) { return Vec2{bx, by}; };
    } else if (e.name == "shear") {
        require_arity(e, 2);
        const double a = e.args[0];
        const double b = e.args[1];
        field.beta = [a, b](double, double y) { return Vec2{a + b * y, 0.0}; };
    } else if (e.name == "ramp-x") {
        require_arity(e, 2);
        const double a = e.args[0];
        const double b = e.args[1];
        field.beta = [a, b](double x, double) { return Vec2{a + b * x, 0.0}; };
        field.divergence = [b](double, double) { return b; };
    } else if (e.name == "stagnation") {
        require_arity(e, 1);
        const double a = e.args[0];
        field.beta = [a](double x, double y) { return Vec2{a * (x + 1.0), -a * y}; };
    } else if (e.name == "decelerating") {
        require_arity(e, 1);
        const double a = e.args[0];
        field.beta = [a](double x, double y) { return Vec2{a * (1.0 - 0.5 * x), 0.5 * a * y}; };
    } else if (e.name == "rotation") {
        require_arity(e, 1);
        const double w = e.args[0];
        field.beta = [w](double x, double y) { return Vec2{w * (y - 0.5), -w * (x - 0.5)}; };
    } else if (e.name == "corner-rotation") {
        require_arity(e, 1);
        const double w = e.args[0];
        field.beta = [w](double x, double y) { return Vec2{w * y, -w * x}; };
    } else {
        throw InvalidArgument("unknown advection field '" + e.name + "'");
    }
    return field;
}

SpaceFunction make_scalar(const std::string& text) {
    using std::numbers::pi;
    const NamedExpression e = parse_named_expression(text);
    if (e.name == "zero") {
        require_arity(e, 0);
        return [](double, double) { return 0.0; };
    }
    if (e.name == "constant") {
        require_arity(e, 1);
        const double c = e.args[0];
        return [c](double, double) { return c; };
    }
    if (e.name == "sin-product") {
        require_arity(e, 1);
        const double a = e.args[0];
        return [a](double x, double y) { return a * std::sin(pi * x) * std::sin(pi * y); };
    }
    if (e.name == "sin-mode") {
        require_arity(e, 3);
        const double a = e.args[0];
        const double k = e.args[1];
        const double l = e.args[2];
        return [a, k, l](double x, double y) { return a * std::sin(k * pi * x) * std::sin(l * pi * y); };
    }
    if (e.name == "gaussian") {
        require_arity(e, 4);
        const double a = e.args[0];
        const double x0 = e.args[1];
        const double y0 = e.args[2];
        const double w = e.args[3];
        if (!(w > 0.0)) {
            throw InvalidArgument("gaussian width must be positive");
        }
        return [a, x0, y0, w](double x, double y) {
            const double r2 = (x - x0) * (x - x0) + (y - y0) * (y - y0);
            return a * std::exp(-r2 / (w * w));
        };
    }
    throw InvalidArgument("unknown scalar function '" + e.name + "'");
}

} // namespace adrsplit
