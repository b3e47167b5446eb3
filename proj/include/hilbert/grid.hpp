#pragma once

// Sampled signals on uniform grids, and the measure-theoretic operations on them.
//
// Measure convention: sample j stands for the constant value f_j on the cell
// [x_j, x_j + h). Integrals are rectangle sums and superlevel-set measures are
// h times a count, which makes both exact for piecewise-constant inputs.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "hilbert/error.hpp"
#include "hilbert/report.hpp"

namespace hilbert {

inline constexpr double infinity = std::numeric_limits<double>::infinity();

class Grid {
public:
    Grid(double origin, double spacing, std::size_t count) : origin_(origin), spacing_(spacing), count_(count) {
        if (!std::isfinite(origin)) throw domain_error("grid origin must be finite");
        if (!(spacing > 0.0) || !std::isfinite(spacing)) throw domain_error("grid spacing must be positive and finite");
        if (count < 2) throw domain_error("grid needs at least 2 samples");
    }

    [[nodiscard]] double origin() const noexcept { return origin_; }
    [[nodiscard]] double spacing() const noexcept { return spacing_; }
    [[nodiscard]] std::size_t size() const noexcept { return count_; }

    /// Position of sample j.
    [[nodiscard]] double x(std::size_t j) const noexcept { return origin_ + static_cast<double>(j) * spacing_; }
    [[nodiscard]] double first() const noexcept { return origin_; }
    [[nodiscard]] double last() const noexcept { return x(count_ - 1); }
    /// Right edge of the last cell.
    [[nodiscard]] double end() const noexcept { return x(count_); }
    /// Total measure covered by the cells.
    [[nodiscard]] double length() const noexcept { return static_cast<double>(count_) * spacing_; }

    friend bool operator==(const Grid&, const Grid&) = default;

private:
    double origin_;
    double spacing_;
    std::size_t count_;
};

[[nodiscard]] inline bool compatible(const Grid& a, const Grid& b) noexcept { return a == b; }

inline void require_compatible(const Grid& a, const Grid& b, const char* what) {
    if (!compatible(a, b)) throw consistency_error(std::string(what) + ": grids differ (origin, spacing and count must match exactly)");
}

class Signal {
public:
    Signal(Grid grid, std::vector<double> values) : grid_(grid), values_(std::move(values)) {
        if (values_.size() != grid_.size()) throw consistency_error("signal value count does not match its grid");
        for (std::size_t j = 0; j < values_.size(); ++j)
            if (!std::isfinite(values_[j]))
                throw domain_error("signal value at index " + std::to_string(j) + " is not finite");
    }

    /// Zero signal on `grid`.
    explicit Signal(Grid grid) : grid_(grid), values_(grid.size(), 0.0) {}

    template <class F>
    static Signal sample(const Grid& grid, F&& fn) {
        std::vector<double> v(grid.size());
        for (std::size_t j = 0; j < v.size(); ++j) v[j] = fn(grid.x(j));
        return Signal(grid, std::move(v));
    }

    [[nodiscard]] const Grid& grid() const noexcept { return grid_; }
    [[nodiscard]] std::span<const double> values() const noexcept { return values_; }
    [[nodiscard]] std::size_t size() const noexcept { return values_.size(); }
    [[nodiscard]] double operator[](std::size_t j) const noexcept { return values_[j]; }

    [[nodiscard]] bool is_zero() const noexcept {
        return std::all_of(values_.begin(), values_.end(), [](double v) { return v == 0.0; });
    }

    friend bool operator==(const Signal&, const Signal&) = default;

    friend Signal operator+(const Signal& a, const Signal& b) {
        require_compatible(a.grid_, b.grid_, "signal addition");
        std::vector<double> v(a.values_);
        for (std::size_t j = 0; j < v.size(); ++j) v[j] += b.values_[j];
        return Signal(a.grid_, std::move(v));
    }

    friend Signal operator-(const Signal& a, const Signal& b) {
        require_compatible(a.grid_, b.grid_, "signal subtraction");
        std::vector<double> v(a.values_);
        for (std::size_t j = 0; j < v.size(); ++j) v[j] -= b.values_[j];
        return Signal(a.grid_, std::move(v));
    }

    friend Signal operator*(double c, const Signal& a) {
        std::vector<double> v(a.values_);
        for (auto& x : v) x *= c;
        return Signal(a.grid_, std::move(v));
    }

    friend Signal operator-(const Signal& a) { return -1.0 * a; }

private:
    Grid grid_;
    std::vector<double> values_;
};

/// Index of `grid`'s sample j within `target` (same spacing, origins a whole number of cells apart).
[[nodiscard]] inline long cell_offset(const Grid& grid, const Grid& target) {
    if (grid.spacing() != target.spacing()) throw consistency_error("cell_offset: spacings differ");
    const double s = (grid.origin() - target.origin()) / target.spacing();
    const double r = std::round(s);
    if (std::abs(s - r) > 1e-6) throw consistency_error("cell_offset: grids are not cell-aligned");
    return static_cast<long>(r);
}

/// `f` placed on a larger cell-aligned grid, zero elsewhere. Samples falling outside `target` must be zero.
[[nodiscard]] inline Signal embed(const Signal& f, const Grid& target) {
    const long off = cell_offset(f.grid(), target);
    std::vector<double> v(target.size(), 0.0);
    for (std::size_t j = 0; j < f.size(); ++j) {
        const long k = off + static_cast<long>(j);
        if (k < 0 || k >= static_cast<long>(target.size())) {
            if (f[j] != 0.0) throw consistency_error("embed: nonzero sample outside the target grid");
            continue;
        }
        v[static_cast<std::size_t>(k)] = f[j];
    }
    return Signal(target, std::move(v));
}

/// Sampled distribution function alpha -> |{x : |f(x)| >= alpha}|.
struct DistributionCurve {
    std::vector<double> thresholds;
    std::vector<double> measures;
};

/// Largest |f_j|.
[[nodiscard]] inline double sup_norm(const Signal& f) noexcept {
    double m = 0.0;
    for (double v : f.values()) m = std::max(m, std::abs(v));
    return m;
}

/// (sum_j |f_j|^p h)^(1/p) for finite p, max |f_j| for p = infinity.
[[nodiscard]] inline double lp_norm(const Signal& f, double p) {
    if (!(p >= 1.0)) throw domain_error("lp_norm: p must be >= 1");
    const double m = sup_norm(f);
    if (p == infinity || m == 0.0) return m;
    const double h = f.grid().spacing();
    // Scale by the sup norm so large p neither overflows nor underflows.
    double acc = 0.0;
    if (p == 1.0) {
        for (double v : f.values()) acc += std::abs(v);
        return acc * h;
    }
    for (double v : f.values()) acc += std::pow(std::abs(v) / m, p);
    return m * std::pow(acc * h, 1.0 / p);
}

/// sum_j f_j g_j h.
[[nodiscard]] inline double inner_product(const Signal& f, const Signal& g) {
    require_compatible(f.grid(), g.grid(), "inner_product");
    double acc = 0.0;
    for (std::size_t j = 0; j < f.size(); ++j) acc += f[j] * g[j];
    return acc * f.grid().spacing();
}

/// sum_j f_j h.
[[nodiscard]] inline double integral(const Signal& f) noexcept {
    double acc = 0.0;
    for (double v : f.values()) acc += v;
    return acc * f.grid().spacing();
}

namespace detail {

inline std::vector<double> sorted_magnitudes(const Signal& f) {
    std::vector<double> mags(f.size());
    std::transform(f.values().begin(), f.values().end(), mags.begin(), [](double v) { return std::abs(v); });
    std::sort(mags.begin(), mags.end());
    return mags;
}

/// h * #{j : mags_j >= alpha}, mags sorted ascending.
inline double superlevel_measure(std::span<const double> sorted_mags, double alpha, double h) {
    const auto it = std::lower_bound(sorted_mags.begin(), sorted_mags.end(), alpha);
    return h * static_cast<double>(std::distance(it, sorted_mags.end()));
}

}  // namespace detail

[[nodiscard]] inline DistributionCurve distribution_function(const Signal& f, std::span<const double> thresholds) {
    for (std::size_t i = 0; i < thresholds.size(); ++i) {
        if (!(thresholds[i] > 0.0) || !std::isfinite(thresholds[i]))
            throw domain_error("distribution_function: thresholds must be positive and finite");
        if (i > 0 && !(thresholds[i] > thresholds[i - 1]))
            throw domain_error("distribution_function: thresholds must be strictly increasing");
    }
    const auto mags = detail::sorted_magnitudes(f);
    DistributionCurve curve;
    curve.thresholds.assign(thresholds.begin(), thresholds.end());
    curve.measures.reserve(thresholds.size());
    for (double a : thresholds) curve.measures.push_back(detail::superlevel_measure(mags, a, f.grid().spacing()));
    return curve;
}

/// D_f(alpha) at a single threshold.
[[nodiscard]] inline double distribution_at(const Signal& f, double alpha) {
    const double a[] = {alpha};
    return distribution_function(f, a).measures.front();
}

/// (p * int_0^{|f|_inf} alpha^{p-1} D_f(alpha) dalpha)^{1/p} by the trapezoid rule on
/// `quadrature_points` uniform thresholds.
[[nodiscard]] inline double layer_cake_norm(const Signal& f, double p, std::size_t quadrature_points) {
    if (!(p >= 1.0) || !std::isfinite(p)) throw domain_error("layer_cake_norm: p must be finite and >= 1");
    if (quadrature_points < 2) throw domain_error("layer_cake_norm: need at least 2 quadrature points");
    const double top = sup_norm(f);
    if (top == 0.0) return 0.0;

    const auto mags = detail::sorted_magnitudes(f);
    const double h = f.grid().spacing();
    const double step = top / static_cast<double>(quadrature_points - 1);

    double acc = 0.0;
    for (std::size_t i = 0; i < quadrature_points; ++i) {
        const double alpha = i + 1 == quadrature_points ? top : step * static_cast<double>(i);
        double value;
        if (i == 0) {
            // Right limit D(0+) = |{f != 0}|; only the p = 1 integrand is nonzero there.
            const auto nz = std::upper_bound(mags.begin(), mags.end(), 0.0);
            const double d0 = h * static_cast<double>(std::distance(nz, mags.end()));
            value = p == 1.0 ? d0 : 0.0;
        } else {
            value = p * std::pow(alpha, p - 1.0) * detail::superlevel_measure(mags, alpha, h);
        }
        const double w = (i == 0 || i + 1 == quadrature_points) ? 0.5 : 1.0;
        acc += w * value;
    }
    return std::pow(acc * step, 1.0 / p);
}

/// Chebyshev: |{|f| >= lambda}| <= |f|_1 / lambda, with one cell of slack.
[[nodiscard]] inline BoundReport chebyshev_bound_check(const Signal& f, double lambda) {
    if (!(lambda > 0.0) || !std::isfinite(lambda)) throw domain_error("chebyshev_bound_check: lambda must be positive");
    const double lhs = distribution_at(f, lambda);
    const double rhs = lp_norm(f, 1.0) / lambda;
    return BoundReport::make("chebyshev", lhs, rhs, 0.0, f.grid().spacing(),
                             {{"lambda", lambda}, {"spacing", f.grid().spacing()}});
}

}  // namespace hilbert
