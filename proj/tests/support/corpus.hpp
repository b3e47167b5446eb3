#pragma once

// Seeded random signals for property tests.

#include <cstdint>
#include <random>
#include <vector>

#include "hilbert/grid.hpp"

namespace corpus {

/// Nonnegative step signal: runs of 1..32 cells, a third of them zero, on a dyadic spacing.
inline hilbert::Signal random_step_signal(std::mt19937_64& rng) {
    std::uniform_int_distribution<int> size_exp(6, 9), spacing_exp(4, 8), run(1, 32), origin(-64, 64);
    std::uniform_real_distribution<double> value(0.0, 4.0), coin(0.0, 1.0);
    const std::size_t n = std::size_t{1} << size_exp(rng);
    const double h = std::ldexp(1.0, -spacing_exp(rng));
    std::vector<double> v;
    v.reserve(n);
    while (v.size() < n) {
        const double level = coin(rng) < 1.0 / 3.0 ? 0.0 : value(rng);
        for (int k = run(rng); k > 0 && v.size() < n; --k) v.push_back(level);
    }
    return hilbert::Signal(hilbert::Grid(origin(rng) * h, h, n), std::move(v));
}

/// Signed step signal on a given grid.
inline hilbert::Signal random_signed_steps(std::mt19937_64& rng, const hilbert::Grid& g) {
    std::uniform_int_distribution<int> run(1, 48);
    std::uniform_real_distribution<double> value(-2.0, 2.0);
    std::vector<double> v;
    while (v.size() < g.size()) {
        const double level = value(rng);
        for (int k = run(rng); k > 0 && v.size() < g.size(); --k) v.push_back(level);
    }
    return hilbert::Signal(g, std::move(v));
}

/// Heights for a decomposition sweep: fractions and multiples of the signal's mean on its support.
inline std::vector<double> height_sweep(const hilbert::Signal& f) {
    double sum = 0.0, top = 0.0;
    std::size_t nz = 0;
    for (double x : f.values()) {
        sum += x;
        top = std::max(top, x);
        if (x != 0.0) ++nz;
    }
    const double mean = nz ? sum / static_cast<double>(nz) : 1.0;
    return {0.25 * mean, 0.5 * mean, mean, 0.5 * (mean + top), 1.1 * top};
}

}  // namespace corpus
