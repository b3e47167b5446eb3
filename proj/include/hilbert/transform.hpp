#pragma once

// The Hilbert transform Hf(x) = (1/pi) p.v. int f(x - t) dt / t, three ways:
//
//  * hilbert_pv        truncated principal-value integral over eps < |t| < R, with
//                      the kernel's odd symmetry used to pair t and -t;
//  * hilbert_spectral  Fourier multiplier -i sign(omega) on a zero-padded DFT;
//  * closed forms      indicator / cosine / sine, plus the exact transform of a
//                      piecewise-constant signal (a finite sum of indicators).
//
// Point convention: the transforms treat sample j as the value of f at x_j.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <numbers>
#include <optional>
#include <thread>
#include <variant>
#include <vector>

#include <boost/math/quadrature/tanh_sinh.hpp>

#include "hilbert/error.hpp"
#include "hilbert/fft.hpp"
#include "hilbert/grid.hpp"

namespace hilbert {

using std::numbers::pi;

// ---------------------------------------------------------------------------
// Principal-value quadrature

struct PVConfig {
    /// Strictly decreasing truncation radii; the last one must be >= the input spacing.
    std::vector<double> epsilons;
    /// Integration is restricted to eps < |t| < outer_cutoff.
    double outer_cutoff = 0.0;
    double convergence_tol = 1e-6;
    /// Worker threads for the per-point loop; 0 picks hardware_concurrency().
    unsigned threads = 0;
};

struct PVResult {
    Signal transform;                             // values at the smallest epsilon
    std::vector<std::vector<double>> per_epsilon; // [k][j]: H_{eps_k} f(x_j)
    std::vector<bool> converged;
    std::vector<double> estimated_error;
};

inline void validate(const PVConfig& cfg, double input_spacing) {
    const auto& eps = cfg.epsilons;
    if (eps.size() < 2) throw config_error("pv: need at least two epsilons to judge convergence");
    for (std::size_t k = 0; k < eps.size(); ++k) {
        if (!(eps[k] > 0.0) || !std::isfinite(eps[k])) throw config_error("pv: epsilons must be positive");
        if (k > 0 && !(eps[k] < eps[k - 1])) throw config_error("pv: epsilons must be strictly decreasing");
    }
    // A relative hair of slack so that eps = h computed as 2^-k matches a grid built from the same h.
    if (eps.back() < input_spacing * (1.0 - 1e-12))
        throw config_error("pv: smallest epsilon is below the grid resolution");
    if (!(cfg.outer_cutoff > eps.front())) throw config_error("pv: outer cutoff must exceed the first epsilon");
    if (!(cfg.convergence_tol > 0.0)) throw config_error("pv: convergence tolerance must be positive");
}

/// Cutoff that makes the truncation exact: every x +- t with |t| >= R lies outside the support.
[[nodiscard]] inline double covering_cutoff(const Grid& input, const Grid& output) {
    const double lo = std::min(input.first(), output.first());
    const double hi = std::max(input.last(), output.last());
    return (hi - lo) + input.spacing();
}

/// Epsilon schedule start * 2^-k for k = 0 .. steps-1.
[[nodiscard]] inline PVConfig make_pv_config(const Grid& input, const Grid& output, double epsilon_start,
                                             std::size_t epsilon_steps, std::optional<double> cutoff = {},
                                             double convergence_tol = 1e-6) {
    PVConfig cfg;
    double e = epsilon_start;
    for (std::size_t k = 0; k < epsilon_steps; ++k, e *= 0.5) cfg.epsilons.push_back(e);
    cfg.outer_cutoff = cutoff.value_or(std::max(covering_cutoff(input, output), 2.0 * epsilon_start));
    cfg.convergence_tol = convergence_tol;
    return cfg;
}

/// Default schedule eps_k = 2^-k (k >= 0) down to the input spacing h. Grids coarser than
/// 1/2 start at the smallest power of two >= 4h instead of at 1.
[[nodiscard]] inline PVConfig default_pv_config(const Grid& input, const Grid& output, double convergence_tol = 1e-6) {
    const double h = input.spacing();
    double start = 1.0;
    while (start < 4.0 * h) start *= 2.0;
    std::size_t steps = 0;
    for (double e = start; e >= h * (1.0 - 1e-12); e *= 0.5) ++steps;
    return make_pv_config(input, output, start, steps, std::nullopt, convergence_tol);
}

namespace detail {

/// Piecewise-linear interpolant through (x_j, f_j), zero outside [x_0, x_{n-1}].
class LinearInterpolant {
public:
    explicit LinearInterpolant(const Signal& f)
        : x0_(f.grid().origin()), h_(f.grid().spacing()), values_(f.values().begin(), f.values().end()) {}

    /// Index of the cell [x_c, x_{c+1}] containing y, or -1 outside the support.
    [[nodiscard]] long cell(double y) const noexcept {
        const double s = (y - x0_) / h_;
        if (s < 0.0 || s > static_cast<double>(values_.size() - 1)) return -1;
        const auto c = static_cast<long>(std::floor(s));
        return std::min<long>(c, static_cast<long>(values_.size()) - 2);
    }

    /// The cell's linear piece evaluated at y (y may sit on the cell's closure).
    [[nodiscard]] double on_cell(long c, double y) const noexcept {
        if (c < 0) return 0.0;
        const double xc = x0_ + static_cast<double>(c) * h_;
        const double a = values_[static_cast<std::size_t>(c)];
        const double b = values_[static_cast<std::size_t>(c) + 1];
        return a + (b - a) * ((y - xc) / h_);
    }

    [[nodiscard]] double origin() const noexcept { return x0_; }
    [[nodiscard]] double spacing() const noexcept { return h_; }
    [[nodiscard]] std::size_t size() const noexcept { return values_.size(); }

private:
    double x0_;
    double h_;
    std::vector<double> values_;
};

/// r - log1p(r) without cancellation for small r.
inline double r_minus_log1p(double r) noexcept {
    if (std::abs(r) < 1e-2) {
        const double r2 = r * r;
        return r2 * (0.5 - r * (1.0 / 3.0 - r * (0.25 - r * (0.2 - r / 6.0))));
    }
    return r - std::log1p(r);
}

/// int_{t0}^{t1} G(t)/t dt for G linear from g0 = G(t0+) to g1 = G(t1-), 0 < t0 < t1.
inline double linear_over_t(double t0, double t1, double g0, double g1) noexcept {
    const double dt = t1 - t0;
    const double r = dt / t0;
    const double slope = (g1 - g0) / dt;
    return g0 * std::log1p(r) + slope * t0 * r_minus_log1p(r);
}

/// Ascending lattice { (k + shift) h : k >= 0 } clipped to an index range.
struct Lattice {
    double shift;  // in units of h, in [0, 1)
    long next_k;
    long last_k;
    [[nodiscard]] bool done() const noexcept { return next_k > last_k; }
    [[nodiscard]] double value(double h) const noexcept { return (static_cast<double>(next_k) + shift) * h; }
};

/// Cumulative integrals S(eps_k) = int_{eps_k}^{R} [F(x-t) - F(x+t)]/t dt for one point.
/// Exact for the piecewise-linear interpolant: the integrand is linear in t between
/// consecutive breakpoints {t : x +- t is a node}, and each piece is integrated in closed form.
inline void pv_point(const LinearInterpolant& F, double x, const std::vector<double>& eps_desc, double cutoff,
                     double* out /* one per epsilon */) {
    const double h = F.spacing();
    const double n1 = static_cast<double>(F.size() - 1);
    double d = (x - F.origin()) / h;
    if (std::abs(d - std::round(d)) < 1e-9) d = std::round(d);

    // The integrand vanishes once both x - t and x + t have left the support.
    const double t_support = std::max(d, n1 - d) * h;
    const double upper = std::min(cutoff, t_support);

    // Left nodes: t = (d - j) h for j <= d; right nodes: t = (j - d) h for j >= d.
    const double fl = std::floor(d);
    Lattice left{d - fl, 0, 0};
    Lattice right{0.0, 0, -1};
    {
        // j runs from min(floor d, n-1) down to 0, i.e. k = d - j - shift runs upward.
        const double jmax = std::min(fl, n1);
        left.next_k = static_cast<long>(fl - jmax);
        left.last_k = jmax >= 0.0 ? static_cast<long>(fl) : -1;
        if (d < 0.0) left.last_k = -1;
        const double cl = std::ceil(d);
        const double jmin = std::max(cl, 0.0);
        right.shift = cl - d;
        right.next_k = static_cast<long>(jmin - cl);
        right.last_k = cl <= n1 ? static_cast<long>(n1 - cl) : -1;
        if (d > n1) right.last_k = -1;
    }

    const std::size_t K = eps_desc.size();
    std::vector<double> at_eps(K, 0.0);  // ascending cumulative integral recorded at each epsilon
    std::size_t next_eps = K;            // eps_desc is descending; walk it from the back
    double acc = 0.0;

    double t0 = eps_desc.back();
    if (t0 >= upper) {
        for (std::size_t k = 0; k < K; ++k) out[k] = 0.0;
        return;
    }
    next_eps = K - 1;  // eps_desc[K-1] == t0 recorded as zero
    at_eps[next_eps] = 0.0;
    std::size_t pending = next_eps;  // index of the next (larger) epsilon still to record
    const double tiny = 1e-12 * h;

    auto skip_past = [&](Lattice& L, double t) {
        while (!L.done() && L.value(h) <= t + tiny) ++L.next_k;
    };
    skip_past(left, t0);
    skip_past(right, t0);

    while (t0 < upper) {
        double t1 = upper;
        if (!left.done()) t1 = std::min(t1, left.value(h));
        if (!right.done()) t1 = std::min(t1, right.value(h));
        bool hits_eps = false;
        if (pending > 0 && eps_desc[pending - 1] <= t1) {
            t1 = eps_desc[pending - 1];
            hits_eps = true;
        }
        if (t1 > t0 + tiny) {
            const double tm = 0.5 * (t0 + t1);
            const long cm = F.cell(x - tm);
            const long cp = F.cell(x + tm);
            const double g0 = F.on_cell(cm, x - t0) - F.on_cell(cp, x + t0);
            const double g1 = F.on_cell(cm, x - t1) - F.on_cell(cp, x + t1);
            acc += linear_over_t(t0, t1, g0, g1);
        }
        if (hits_eps) {
            --pending;
            at_eps[pending] = acc;
        }
        t0 = std::max(t0, t1);
        skip_past(left, t0);
        skip_past(right, t0);
    }
    // Epsilons at or beyond `upper` see an empty integration range.
    while (pending > 0) {
        --pending;
        at_eps[pending] = acc;
    }
    for (std::size_t k = 0; k < K; ++k) out[k] = (acc - at_eps[k]) / pi;
}

template <class Body>
void parallel_for(std::size_t n, unsigned threads, Body&& body) {
    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(n, 1)));
    if (threads <= 1) {
        for (std::size_t i = 0; i < n; ++i) body(i);
        return;
    }
    std::vector<std::thread> pool;
    const std::size_t chunk = (n + threads - 1) / threads;
    for (unsigned w = 0; w < threads; ++w) {
        const std::size_t lo = w * chunk;
        const std::size_t hi = std::min(n, lo + chunk);
        if (lo >= hi) break;
        pool.emplace_back([lo, hi, &body] {
            for (std::size_t i = lo; i < hi; ++i) body(i);
        });
    }
    for (auto& t : pool) t.join();
}

}  // namespace detail

/// Truncated principal-value transform of the linear interpolant of f, evaluated on
/// `output` for every epsilon of the schedule.
[[nodiscard]] inline PVResult hilbert_pv(const Signal& f, const Grid& output, const PVConfig& cfg) {
    validate(cfg, f.grid().spacing());
    const detail::LinearInterpolant F(f);
    const std::size_t K = cfg.epsilons.size();
    const std::size_t m = output.size();

    std::vector<double> flat(K * m, 0.0);
    detail::parallel_for(m, cfg.threads, [&](std::size_t j) {
        std::vector<double> vals(K);
        detail::pv_point(F, output.x(j), cfg.epsilons, cfg.outer_cutoff, vals.data());
        for (std::size_t k = 0; k < K; ++k) flat[k * m + j] = vals[k];
    });

    PVResult res{Signal(output), {}, std::vector<bool>(m), std::vector<double>(m)};
    res.per_epsilon.resize(K);
    for (std::size_t k = 0; k < K; ++k)
        res.per_epsilon[k].assign(flat.begin() + static_cast<long>(k * m), flat.begin() + static_cast<long>((k + 1) * m));

    // Near t = 0 the paired integrand is O(t), so the truncation error scales like eps and the
    // remainder is the geometric tail delta rho / (1 - rho) of the last difference. It is
    // doubled to cover the interpolation error the first-order model ignores.
    const double rho = cfg.epsilons[K - 1] / cfg.epsilons[K - 2];
    for (std::size_t j = 0; j < m; ++j) {
        const double delta = std::abs(res.per_epsilon[K - 1][j] - res.per_epsilon[K - 2][j]);
        res.converged[j] = delta < cfg.convergence_tol;
        res.estimated_error[j] = 2.0 * delta * rho / (1.0 - rho);
    }
    res.transform = Signal(output, res.per_epsilon[K - 1]);
    return res;
}

// ---------------------------------------------------------------------------
// Spectral multiplier

struct SpectralConfig {
    /// The signal is zero-padded to padding_factor * n samples before the DFT.
    std::size_t padding_factor = 4;
    /// Add the difference between the line kernel and the periodic kernel the padded DFT
    /// implies, so the result is the transform on the real line rather than on a circle.
    bool periodization_correction = true;
};

inline void validate(const SpectralConfig& cfg) {
    if (cfg.padding_factor < 2) throw config_error("spectral: padding factor must be >= 2");
}

namespace detail {

// Multiplier -i sign(k) on N bins; DC and (for even N) the Nyquist bin are unpaired and get 0.
inline std::complex<double> sign_multiplier(std::size_t k, std::size_t N) noexcept {
    if (k == 0 || 2 * k == N) return {0.0, 0.0};
    return 2 * k < N ? std::complex<double>{0.0, -1.0} : std::complex<double>{0.0, 1.0};
}

// The N-point multiplier above is circular convolution with d_m = (2/N) cot(pi m / N) (odd m),
// while the line operator on samples convolves with 2 / (pi m) (odd m). Their difference is
// smooth; for outputs inside the window only lags |m| < n matter, which a size-N circular
// convolution with N >= 2n reproduces without wrap-around.
inline std::vector<std::complex<double>> correction_spectrum(std::size_t n, std::size_t N) {
    std::vector<std::complex<double>> c(N, 0.0);
    for (std::size_t m = 1; m < n; m += 2) {
        const double md = static_cast<double>(m);
        const double v = 2.0 / (pi * md) - (2.0 / static_cast<double>(N)) / std::tan(pi * md / static_cast<double>(N));
        c[m] = v;
        c[N - m] = -v;
    }
    fft::forward(c);
    return c;
}

enum class Power { once, twice };

inline Signal apply_multiplier(const Signal& f, const SpectralConfig& cfg, Power power) {
    validate(cfg);
    const std::size_t n = f.size();
    const std::size_t N = cfg.padding_factor * n;
    const double scale = sup_norm(f);
    if (scale == 0.0) return Signal(f.grid());

    std::vector<std::complex<double>> data(N, 0.0);
    for (std::size_t j = 0; j < n; ++j) data[j] = f[j];
    fft::forward(data);

    if (power == Power::once) {
        std::vector<std::complex<double>> corr;
        if (cfg.periodization_correction) corr = correction_spectrum(n, N);
        for (std::size_t k = 0; k < N; ++k) {
            auto mult = sign_multiplier(k, N);
            if (!corr.empty()) mult += corr[k];
            data[k] *= mult;
        }
    } else {
        // (-i sign w)^2 = -1 away from w = 0. The DC and Nyquist bins stand for frequency
        // bands: on the line, the squared multiplier averages to -1 over them; on the
        // circle, they are annihilated together with the single multiplier.
        const std::complex<double> unpaired = cfg.periodization_correction ? -1.0 : 0.0;
        for (std::size_t k = 0; k < N; ++k) {
            const bool edge = k == 0 || 2 * k == N;
            data[k] *= edge ? unpaired : std::complex<double>{-1.0, 0.0};
        }
    }

    fft::inverse(data);
    std::vector<double> out(n);
    double residue = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        out[j] = data[j].real();
        residue = std::max(residue, std::abs(data[j].imag()));
    }
    if (residue > 1e-10 * scale)
        throw consistency_error("spectral: imaginary residue " + std::to_string(residue) + " exceeds 1e-10 * |f|_inf");
    return Signal(f.grid(), std::move(out));
}

}  // namespace detail

[[nodiscard]] inline Signal hilbert_spectral(const Signal& f, const SpectralConfig& cfg = {}) {
    return detail::apply_multiplier(f, cfg, detail::Power::once);
}

/// H(Hf) through the squared multiplier; equals -f up to rounding on the line.
[[nodiscard]] inline Signal apply_twice(const Signal& f, const SpectralConfig& cfg = {}) {
    return detail::apply_multiplier(f, cfg, detail::Power::twice);
}

// ---------------------------------------------------------------------------
// Closed forms

struct Indicator {
    double a;
    double b;
};
struct Cosine {
    double omega;
};
struct Sine {
    double omega;
};
using ClosedFormKind = std::variant<Indicator, Cosine, Sine>;

struct ClosedFormResult {
    Signal transform;            // singular samples hold 0 and must be ignored
    std::vector<bool> singular;
};

[[nodiscard]] inline ClosedFormResult hilbert_closed_form(const ClosedFormKind& kind, const Grid& grid) {
    ClosedFormResult res{Signal(grid), std::vector<bool>(grid.size(), false)};
    std::vector<double> v(grid.size(), 0.0);
    std::visit(
        [&](const auto& k) {
            using K = std::decay_t<decltype(k)>;
            if constexpr (std::is_same_v<K, Indicator>) {
                if (!(k.a < k.b)) throw domain_error("closed form indicator: need a < b");
                for (std::size_t j = 0; j < grid.size(); ++j) {
                    const double x = grid.x(j);
                    if (x == k.a || x == k.b) {
                        res.singular[j] = true;
                        continue;
                    }
                    v[j] = std::log(std::abs((x - k.a) / (x - k.b))) / pi;
                }
            } else if constexpr (std::is_same_v<K, Cosine>) {
                // H cos(w x) = sign(w) sin(w x); the constant (w = 0) maps to 0.
                for (std::size_t j = 0; j < grid.size(); ++j) v[j] = std::sin(std::abs(k.omega) * grid.x(j));
            } else {
                // H sin(w x) = -sign(w) cos(w x)
                const double s = k.omega > 0 ? 1.0 : (k.omega < 0 ? -1.0 : 0.0);
                for (std::size_t j = 0; j < grid.size(); ++j) v[j] = -s * std::cos(k.omega * grid.x(j));
            }
        },
        kind);
    res.transform = Signal(grid, std::move(v));
    return res;
}

/// Exact transform of the step function sum_j f_j chi_[x_j + offset, x_j + offset + h),
/// evaluated at arbitrary points. offset = 0 is the measure convention of grid.hpp;
/// offset = -h/2 centres each cell on its sample, matching the point convention.
class StepTransform {
public:
    explicit StepTransform(const Signal& f, double cell_offset = 0.0) {
        const auto& g = f.grid();
        const double h = g.spacing();
        std::size_t j = 0;
        while (j < f.size()) {
            std::size_t k = j;
            while (k + 1 < f.size() && f[k + 1] == f[j]) ++k;
            if (f[j] != 0.0) runs_.push_back({g.x(j) + cell_offset, g.x(k) + cell_offset + h, f[j]});
            j = k + 1;
        }
        if (!runs_.empty()) {
            lo_ = runs_.front().a;
            hi_ = runs_.back().b;
        }
    }

    /// +-infinity at a jump of the step function.
    [[nodiscard]] double operator()(double x) const noexcept {
        double acc = 0.0;
        for (const auto& r : runs_) acc += r.value * log_ratio(x, r.a, r.b);
        return acc / pi;
    }

    [[nodiscard]] bool empty() const noexcept { return runs_.empty(); }
    [[nodiscard]] double support_left() const noexcept { return lo_; }
    [[nodiscard]] double support_right() const noexcept { return hi_; }

private:
    struct Run {
        double a, b, value;
    };

    // log |(x - a) / (x - b)|, accurate far from [a, b].
    static double log_ratio(double x, double a, double b) noexcept {
        if (x > b) return std::log1p((b - a) / (x - b));
        if (x < a) return std::log1p(-(b - a) / (b - x));
        return std::log((x - a) / (b - x));
    }

    std::vector<Run> runs_;
    double lo_ = 0.0;
    double hi_ = 0.0;
};

/// int_{R \ [left, right]} |Hf|^p dx for the step function of `f` (see StepTransform).
/// Each half-line is mapped to (0, 1] by x = edge + s (1/u - 1) and integrated by tanh-sinh.
[[nodiscard]] inline double exterior_lp_integral(const StepTransform& Hf, double p, double left, double right) {
    if (!(p >= 1.0) || !std::isfinite(p)) throw domain_error("exterior_lp_integral: p must be finite and >= 1");
    if (Hf.empty()) return 0.0;
    const double s = std::max(right - left, 1e-300);
    boost::math::quadrature::tanh_sinh<double> integrator;

    auto side = [&](double edge, double dir) {
        auto integrand = [&](double u, double uc) -> double {
            if (u < 1e-100) return 0.0;
            // 1/u - 1 = (1 - u)/u, with 1 - u taken from the complement near u = 1.
            const double one_minus_u = u > 0.5 ? uc : 1.0 - u;
            const double x = edge + dir * s * (one_minus_u / u);
            const double v = std::abs(Hf(x));
            if (!std::isfinite(v)) return 0.0;
            return std::pow(v, p) * s / (u * u);
        };
        return integrator.integrate(integrand, 0.0, 1.0, 1e-12);
    };
    return side(right, 1.0) + side(left, -1.0);
}

/// |Hf|_p over the whole line: the window samples `hf` (rectangle rule, each sample owning
/// [x - h/2, x + h/2)) plus the exterior, evaluated exactly from `f` under the centred-cell
/// step convention. `f` must live inside the window of `hf`.
[[nodiscard]] inline double line_lp_norm(const Signal& f, const Signal& hf, double p) {
    if (!(p >= 1.0) || !std::isfinite(p)) throw domain_error("line_lp_norm: p must be finite and >= 1");
    const auto& w = hf.grid();
    const double hw = w.spacing();
    const double left = w.first() - 0.5 * hw;
    const double right = w.last() + 0.5 * hw;
    const double h = f.grid().spacing();
    if (f.grid().first() - 0.5 * h < left - 1e-12 * hw || f.grid().last() + 0.5 * h > right + 1e-12 * hw)
        throw consistency_error("line_lp_norm: signal extends beyond the transform window");

    double window = 0.0;
    for (double v : hf.values()) window += std::pow(std::abs(v), p);
    window *= hw;
    const StepTransform exact(f, -0.5 * h);
    return std::pow(window + exterior_lp_integral(exact, p, left, right), 1.0 / p);
}

// ---------------------------------------------------------------------------
// Handles: a transform chosen once and passed to the checks that need one.

using TransformHandle = std::function<Signal(const Signal&)>;

[[nodiscard]] inline TransformHandle spectral_handle(SpectralConfig cfg = {}) {
    validate(cfg);
    return [cfg](const Signal& f) { return hilbert_spectral(f, cfg); };
}

/// Exact transform of the step function (measure convention), sampled at cell midpoints.
[[nodiscard]] inline TransformHandle step_handle() {
    return [](const Signal& f) {
        const StepTransform H(f);
        const double half = 0.5 * f.grid().spacing();
        return Signal::sample(f.grid(), [&](double x) { return H(x + half); });
    };
}

[[nodiscard]] inline TransformHandle pv_handle(double convergence_tol = 1e-6, unsigned threads = 0) {
    return [convergence_tol, threads](const Signal& f) {
        auto cfg = default_pv_config(f.grid(), f.grid(), convergence_tol);
        cfg.threads = threads;
        return hilbert_pv(f, f.grid(), cfg).transform;
    };
}

}  // namespace hilbert
