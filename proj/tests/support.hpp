#pragma once

// Shared generators for the test suites: random expressions, random Walker
// specs with nontrivial screen metrics, and random points.

#include "wh/metric_spec.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <random>
#include <sstream>
#include <string>

namespace wh::testing {

inline double uniform(std::mt19937_64& rng, double lo, double hi)
{
    return std::uniform_real_distribution<double>(lo, hi)(rng);
}

inline int pick(std::mt19937_64& rng, int lo, int hi)
{
    return std::uniform_int_distribution<int>(lo, hi)(rng);
}

inline std::string coef(std::mt19937_64& rng, double lo, double hi)
{
    std::ostringstream s;
    s.precision(3);
    s << std::fixed << uniform(rng, lo, hi);
    return "(" + s.str() + ")";
}

/// Random polynomial in the given coordinate range, printed as text.
inline std::string random_polynomial(std::mt19937_64& rng, int first_coord, int last_coord, int depth = 3)
{
    if (depth == 0 || pick(rng, 0, 3) == 0) {
        if (pick(rng, 0, 2) == 0) return coef(rng, -2.0, 2.0);
        return "x" + std::to_string(pick(rng, first_coord, last_coord));
    }
    const std::string a = random_polynomial(rng, first_coord, last_coord, depth - 1);
    switch (pick(rng, 0, 3)) {
    case 0: return "(" + a + " + " + random_polynomial(rng, first_coord, last_coord, depth - 1) + ")";
    case 1: return "(" + a + " - " + random_polynomial(rng, first_coord, last_coord, depth - 1) + ")";
    case 2: return "(" + a + " * " + random_polynomial(rng, first_coord, last_coord, depth - 1) + ")";
    default: return "(" + a + ")^" + std::to_string(pick(rng, 2, 3));
    }
}

/// Random profile f(x1..x{n+1}) independent of x0 (pp-wave family), with at
/// least a quadratic in every screen coordinate so the Hessian is nontrivial.
inline std::string random_ppwave_profile(std::mt19937_64& rng, int n)
{
    std::string f;
    for (int i = 1; i <= n; ++i) f += coef(rng, 0.5, 2.0) + "*x" + std::to_string(i) + "^2 + ";
    f += random_polynomial(rng, 1, n + 1, 3);
    return f;
}

/// Walker spec document with x0-dependent f and a curved, u-dependent screen metric
/// that stays positive definite on |x| <= 2 for n <= 4.
inline std::string random_walker_document(std::mt19937_64& rng, int n)
{
    std::ostringstream doc;
    doc << "n = " << n << "\n";
    doc << "f = \"" << coef(rng, -0.5, 0.5) << "*x0^2 + " << coef(rng, -1.0, 1.0) << "*x0*x"
        << pick(rng, 1, n) << " + " << random_ppwave_profile(rng, n) << "\"\n";
    auto screen_arg = [&] {
        return coef(rng, -1.0, 1.0) + "*x" + std::to_string(pick(rng, 1, n + 1)) + " + " +
               coef(rng, -1.0, 1.0) + "*x" + std::to_string(pick(rng, 1, n + 1));
    };
    for (int i = 1; i <= n; ++i) {
        const int a = pick(rng, 1, n + 1), b = pick(rng, 1, n + 1);
        doc << "g_" << i << "_" << i << " = \"2 + 0.3*sin(" << screen_arg() << ") + 0.05*x" << a << "*x" << b << "\"\n";
        for (int j = i + 1; j <= n; ++j)
            doc << "g_" << i << "_" << j << " = \"" << coef(rng, -0.15, 0.15) << "*cos(" << screen_arg() << ")\"\n";
    }
    return doc.str();
}

inline Point random_point(std::mt19937_64& rng, int n, double half_width = 1.0)
{
    Point p(n + 2);
    for (int i = 0; i < n + 2; ++i) p[i] = uniform(rng, -half_width, half_width);
    return p;
}

inline double rel_err(double got, double want)
{
    return std::abs(got - want) / std::max(1.0, std::abs(want));
}

}  // namespace wh::testing
