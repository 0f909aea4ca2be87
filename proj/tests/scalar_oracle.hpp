#pragma once

// Exact misclassification probability of the MAP rule for two zero-mean
// scalar Gaussians, by composite Simpson quadrature of min(p1 f1, p2 f2).

#include <algorithm>
#include <cmath>
#include <numbers>

namespace oracle {

inline double scalar_map_error(double p1, double var1, double p2, double var2, int panels = 200000) {
    auto density = [](double y, double v) { return std::exp(-0.5 * y * y / v) / std::sqrt(2 * std::numbers::pi * v); };
    auto f = [&](double y) { return std::min(p1 * density(y, var1), p2 * density(y, var2)); };
    // Symmetric integrand; integrate [0, L] and double.
    const double span = 12.0 * std::sqrt(std::max(var1, var2));
    const double h = span / panels;
    double acc = f(0.0) + f(span);
    for (int k = 1; k < panels; ++k) acc += (k % 2 ? 4.0 : 2.0) * f(k * h);
    return 2.0 * acc * h / 3.0;
}

} // namespace oracle
