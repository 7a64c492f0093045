#pragma once

// Benchmark functions with their boxes and uncertainty radii, plus the
// Monte-Carlo reference used to re-estimate worst-case cost after a search.

#include <cmath>
#include <numbers>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "robustmin/core.hpp"

namespace robustmin {

struct TestFunctionSpec {
    std::string name;
    int min_dim = 1;
    int max_dim = 0;  // 0 = any dimension >= min_dim
    double lower = 0.0;
    double upper = 0.0;  // box is the same interval in every coordinate
    double gamma = 0.0;
};

namespace testfn {

inline double sq(double v) { return v * v; }

inline double ackley(std::span<const double> x) {
    const double n = static_cast<double>(x.size());
    double s2 = 0.0, sc = 0.0;
    for (double v : x) {
        s2 += v * v;
        sc += std::cos(2.0 * std::numbers::pi * v);
    }
    return -20.0 * std::exp(-0.2 * std::sqrt(s2 / n)) - std::exp(sc / n) + 20.0 +
           std::exp(1.0);
}

inline double multipeak_f1(std::span<const double> x) {
    constexpr double two_ln2 = 2.0 * std::numbers::ln2;
    double s = 0.0;
    for (double v : x) {
        double env = std::exp(-two_ln2 * sq((v - 0.1) / 0.8));
        double sn = std::sin(5.0 * std::numbers::pi * v);
        double s2 = sn * sn;
        s += (v > 0.4 && v <= 0.6) ? env * std::sqrt(std::fabs(sn)) : env * s2 * s2 * s2;
    }
    return -s / static_cast<double>(x.size());
}

inline double multipeak_f2(std::span<const double> x) {
    double s = 0.0;
    for (double v : x)
        s += 2.0 * std::sin(10.0 * std::exp(-0.2 * v) * v) * std::exp(-0.25 * v);
    return s / static_cast<double>(x.size());
}

inline double rastrigin(std::span<const double> x) {
    double s = 10.0 * static_cast<double>(x.size());
    for (double v : x) s += v * v - 10.0 * std::cos(2.0 * std::numbers::pi * v);
    return s;
}

inline double rosenbrock(std::span<const double> x) {
    double s = 0.0;
    for (std::size_t i = 0; i + 1 < x.size(); ++i)
        s += 100.0 * sq(x[i + 1] - x[i] * x[i]) + sq(x[i] - 1.0);
    return s;
}

inline double sawtooth(std::span<const double> x) {
    double s = 0.0;
    for (double v : x)
        if (v >= -0.8 && v < 0.2) s += v + 0.8;
    return 1.0 - s / static_cast<double>(x.size());
}

inline double sphere(std::span<const double> x) {
    double s = 0.0;
    for (double v : x) s += v * v;
    return s;
}

inline double volcano(std::span<const double> x) {
    double s = 0.0;
    for (double v : x) s += v * v;
    double r = std::sqrt(s);
    return r > 1.0 ? std::sqrt(r) - 1.0 : 0.0;
}

inline double poly2d(std::span<const double> p) {
    const double x = p[0], y = p[1];
    const double x2 = x * x, x3 = x2 * x, x4 = x2 * x2, x5 = x4 * x, x6 = x4 * x2;
    const double y2 = y * y, y3 = y2 * y, y4 = y2 * y2, y5 = y4 * y, y6 = y4 * y2;
    return 2.0 * x6 - 12.2 * x5 + 21.2 * x4 + 6.2 * x - 6.4 * x3 - 4.7 * x2 + y6 -
           11.0 * y5 + 43.3 * y4 - 10.0 * y - 74.8 * y3 + 56.9 * y2 - 4.1 * x * y -
           0.1 * y2 * x2 + 0.4 * y2 * x + 0.4 * x2 * y;
}

}  // namespace testfn

inline const std::vector<TestFunctionSpec>& test_functions() {
    static const std::vector<TestFunctionSpec> table = {
        {"ackley", 1, 0, -32.768, 32.768, 3.0},
        {"mpf1", 1, 0, 0.0, 1.0, 0.0625},
        {"mpf2", 1, 0, 0.0, 10.0, 0.5},
        {"rastrigin", 1, 0, -5.12, 5.12, 0.5},
        {"rosenbrock", 2, 0, -2.048, 2.048, 0.25},
        {"sawtooth", 1, 0, -1.0, 1.0, 0.2},
        {"sphere", 1, 0, -5.0, 5.0, 1.0},
        {"volcano", 1, 0, -10.0, 10.0, 1.5},
        {"poly2D", 2, 2, -1.0, 4.0, 0.5},
    };
    return table;
}

inline const TestFunctionSpec* find_test_function(std::string_view name) {
    for (const auto& spec : test_functions())
        if (spec.name == name) return &spec;
    return nullptr;
}

inline Problem make_problem(const TestFunctionSpec& spec, int dim) {
    if (dim < spec.min_dim || (spec.max_dim > 0 && dim > spec.max_dim))
        throw std::invalid_argument(spec.name + ": unsupported dimension " +
                                    std::to_string(dim));
    Problem p;
    p.name = spec.name;
    p.dim = dim;
    p.lower.assign(dim, spec.lower);
    p.upper.assign(dim, spec.upper);
    p.gamma = spec.gamma;
    if (spec.name == "ackley") p.objective = testfn::ackley;
    else if (spec.name == "mpf1") p.objective = testfn::multipeak_f1;
    else if (spec.name == "mpf2") p.objective = testfn::multipeak_f2;
    else if (spec.name == "rastrigin") p.objective = testfn::rastrigin;
    else if (spec.name == "rosenbrock") p.objective = testfn::rosenbrock;
    else if (spec.name == "sawtooth") p.objective = testfn::sawtooth;
    else if (spec.name == "sphere") p.objective = testfn::sphere;
    else if (spec.name == "volcano") p.objective = testfn::volcano;
    else if (spec.name == "poly2D") p.objective = testfn::poly2d;
    else throw std::invalid_argument("no objective registered for: " + spec.name);
    p.validate();
    return p;
}

inline Problem make_problem(std::string_view name, int dim) {
    const TestFunctionSpec* spec = find_test_function(name);
    if (!spec) throw std::invalid_argument("unknown test function: " + std::string(name));
    return make_problem(*spec, dim);
}

// Monte-Carlo estimate of the worst-case cost at x: max of the nominal value
// and `samples` uniform draws from the gamma-ball. Never touches a ledger, so
// post-processing cannot disturb budget accounting.
inline double reference_worst_case(const Problem& problem, std::span<const double> x,
                                   int samples, RngStream& rng) {
    double worst = problem.objective(x);
    for (int s = 0; s < samples; ++s) {
        Point p = sample_in_ball(rng, x, problem.gamma);
        worst = std::max(worst, problem.objective(p));
    }
    return worst;
}

}  // namespace robustmin
