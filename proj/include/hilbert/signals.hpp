#pragma once

// Standard test signals.

#include <cmath>

#include "hilbert/grid.hpp"

namespace hilbert::signals {

[[nodiscard]] inline Signal gaussian(const Grid& g, double center = 0.0, double width = 1.0) {
    return Signal::sample(g, [=](double x) {
        const double u = (x - center) / width;
        return std::exp(-0.5 * u * u);
    });
}

[[nodiscard]] inline Signal modulated_gaussian(const Grid& g, double center, double width, double omega) {
    return Signal::sample(g, [=](double x) {
        const double u = (x - center) / width;
        return std::exp(-0.5 * u * u) * std::cos(omega * (x - center));
    });
}

/// exp(-1 / (1 - u^2)) for |u| < 1, u = (x - center) / radius.
[[nodiscard]] inline Signal bump(const Grid& g, double center = 0.0, double radius = 1.0) {
    return Signal::sample(g, [=](double x) {
        const double u = (x - center) / radius;
        return std::abs(u) < 1.0 ? std::exp(-1.0 / (1.0 - u * u)) : 0.0;
    });
}

/// chi_[a,b) under the step convention: sample j is 1 iff a <= x_j < b.
[[nodiscard]] inline Signal indicator(const Grid& g, double a, double b) {
    return Signal::sample(g, [=](double x) { return x >= a && x < b ? 1.0 : 0.0; });
}

/// chi_[a,b] sampled as a point function, with the mean value 1/2 at the two jumps.
[[nodiscard]] inline Signal indicator_midpoint(const Grid& g, double a, double b) {
    return Signal::sample(g, [=](double x) {
        if (x == a || x == b) return 0.5;
        return x > a && x < b ? 1.0 : 0.0;
    });
}

/// max(0, 1 - |x|)
[[nodiscard]] inline Signal tent(const Grid& g) {
    return Signal::sample(g, [](double x) { return std::max(0.0, 1.0 - std::abs(x)); });
}

[[nodiscard]] inline Signal cosine(const Grid& g, double omega) {
    return Signal::sample(g, [=](double x) { return std::cos(omega * x); });
}

[[nodiscard]] inline Signal sine(const Grid& g, double omega) {
    return Signal::sample(g, [=](double x) { return std::sin(omega * x); });
}

}  // namespace hilbert::signals
