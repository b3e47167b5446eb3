#pragma once

// Calderon-Zygmund decomposition at height lambda on a grid, the good/bad split, and the
// numerical weak-(1,1) pipeline built on it.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "hilbert/error.hpp"
#include "hilbert/grid.hpp"
#include "hilbert/report.hpp"
#include "hilbert/transform.hpp"

namespace hilbert {

struct DyadicInterval {
    double left = 0.0;
    double length = 0.0;
    unsigned generation = 0;
    double average = 0.0;    // rectangle-rule mean of f over the interval
    std::size_t first_cell = 0;  // index into the decomposition's working grid
    std::size_t cell_count = 0;

    [[nodiscard]] double center() const noexcept { return left + 0.5 * length; }
    [[nodiscard]] double right() const noexcept { return left + length; }
    /// Same centre, twice the length.
    [[nodiscard]] DyadicInterval doubled() const noexcept {
        DyadicInterval d = *this;
        d.left = left - 0.5 * length;
        d.length = 2.0 * length;
        return d;
    }
};

struct CZDecomposition {
    double height = 0.0;
    std::vector<DyadicInterval> selected;
    double omega_length = 0.0;
    /// f's grid extended to the right far enough to hold the initial mesh interval.
    Grid working_grid{0.0, 1.0, 2};
    Grid source_grid{0.0, 1.0, 2};
    Signal good{Grid{0.0, 1.0, 2}};
    /// b_k on its own grid covering I_k (two cells when I_k is a single cell).
    std::vector<Signal> bad_parts;
    double initial_mesh_length = 0.0;
    unsigned mesh_exponent = 0;  // the mesh interval spans 2^mesh_exponent cells
};

struct CZOptions {
    /// Reuse a mesh of 2^exponent cells (e.g. from another decomposition of the same f).
    std::optional<unsigned> mesh_exponent;
};

namespace detail {

struct SupportCells {
    std::size_t first = 0;
    std::size_t count = 0;
};

inline SupportCells support_cells(const Signal& f) {
    std::size_t lo = f.size(), hi = 0;
    for (std::size_t j = 0; j < f.size(); ++j) {
        if (f[j] != 0.0) {
            lo = std::min(lo, j);
            hi = j;
        }
    }
    if (lo == f.size()) return {};
    return {lo, hi - lo + 1};
}

}  // namespace detail

inline void good_bad_split_into(const Signal& f, CZDecomposition& d);

[[nodiscard]] inline CZDecomposition cz_decompose(const Signal& f, double lambda, const CZOptions& opts = {}) {
    if (!(lambda > 0.0) || !std::isfinite(lambda)) throw domain_error("cz_decompose: lambda must be positive and finite");
    for (std::size_t j = 0; j < f.size(); ++j)
        if (f[j] < 0.0) throw domain_error("cz_decompose: sample " + std::to_string(j) + " is negative");

    const double h = f.grid().spacing();
    CZDecomposition d;
    d.height = lambda;
    d.source_grid = f.grid();
    d.working_grid = f.grid();
    d.good = f;

    const auto supp = detail::support_cells(f);
    if (supp.count == 0) return d;

    // Pairwise sums level by level; level l node i covers cells [i 2^l, (i+1) 2^l) of the support.
    // Float addition of nonnegative terms is monotone, so a child's sum never exceeds its parent's.
    std::vector<std::vector<double>> levels;
    levels.emplace_back(f.values().begin() + static_cast<long>(supp.first),
                        f.values().begin() + static_cast<long>(supp.first + supp.count));
    while (levels.back().size() > 1) {
        const auto& prev = levels.back();
        std::vector<double> next((prev.size() + 1) / 2);
        for (std::size_t i = 0; i < next.size(); ++i)
            next[i] = prev[2 * i] + (2 * i + 1 < prev.size() ? prev[2 * i + 1] : 0.0);
        levels.push_back(std::move(next));
    }
    const double total = levels.back()[0];

    unsigned K = static_cast<unsigned>(levels.size() - 1);
    auto mean_at = [](double sum, unsigned l) { return std::ldexp(sum, -static_cast<int>(l)); };
    if (opts.mesh_exponent) {
        if (*opts.mesh_exponent < K) throw config_error("cz_decompose: mesh does not cover the support");
        K = *opts.mesh_exponent;
        if (mean_at(total, K) > lambda) throw config_error("cz_decompose: mesh average exceeds lambda");
    } else {
        while (mean_at(total, K) > lambda) ++K;
    }
    d.mesh_exponent = K;
    d.initial_mesh_length = std::ldexp(h, static_cast<int>(K));

    const std::size_t mesh_cells = std::size_t{1} << K;
    const std::size_t needed = supp.first + mesh_cells;
    if (needed > f.size()) d.working_grid = Grid(f.grid().origin(), h, needed);

    auto node_sum = [&](unsigned l, std::size_t i) -> double {
        if (l < levels.size()) return i < levels[l].size() ? levels[l][i] : 0.0;
        return i == 0 ? total : 0.0;
    };

    // Depth-first in left-to-right order so the selected intervals come out sorted.
    struct Node {
        unsigned level;
        std::size_t index;
    };
    std::vector<Node> stack{{K, 0}};
    while (!stack.empty()) {
        const Node nd = stack.back();
        stack.pop_back();
        const std::size_t start = nd.index << nd.level;
        if (start >= supp.count) continue;
        const double sum = node_sum(nd.level, nd.index);
        const double avg = mean_at(sum, nd.level);
        if (avg > lambda) {
            DyadicInterval I;
            I.first_cell = supp.first + start;
            I.cell_count = std::size_t{1} << nd.level;
            I.left = d.working_grid.x(I.first_cell);
            I.length = static_cast<double>(I.cell_count) * h;
            I.generation = K - nd.level;
            I.average = avg;
            d.selected.push_back(I);
            continue;
        }
        if (nd.level == 0 || sum == 0.0) continue;
        stack.push_back({nd.level - 1, 2 * nd.index + 1});
        stack.push_back({nd.level - 1, 2 * nd.index});
    }
    for (const auto& I : d.selected) d.omega_length += I.length;

    good_bad_split_into(f, d);
    return d;
}

/// Recomputes g and the b_k of `d` from f.
inline void good_bad_split_into(const Signal& f, CZDecomposition& d) {
    if (!(f.grid() == d.source_grid)) throw consistency_error("good_bad_split: signal does not match the decomposition");
    const Grid& W = d.working_grid;
    const double h = W.spacing();
    std::vector<double> g(W.size(), 0.0);
    std::copy(f.values().begin(), f.values().end(), g.begin());
    d.bad_parts.clear();

    for (const auto& I : d.selected) {
        if (I.first_cell + I.cell_count > W.size()) throw consistency_error("good_bad_split: interval outside the working grid");
        // The cells past f's grid are zero; a pairwise tree on the padded range gives the same
        // sum cz_decompose used, so the stored average must reproduce bit-for-bit.
        std::vector<double> cells(g.begin() + static_cast<long>(I.first_cell),
                                  g.begin() + static_cast<long>(I.first_cell + I.cell_count));
        std::vector<double> s = cells;
        while (s.size() > 1) {
            std::vector<double> next(s.size() / 2);
            for (std::size_t i = 0; i < next.size(); ++i) next[i] = s[2 * i] + s[2 * i + 1];
            s = std::move(next);
        }
        const double avg = s[0] / static_cast<double>(I.cell_count);
        if (avg != I.average) throw consistency_error("good_bad_split: interval average does not match the signal");

        std::vector<double> b(std::max<std::size_t>(I.cell_count, 2), 0.0);
        double mass = 0.0;
        for (std::size_t i = 0; i < I.cell_count; ++i) {
            b[i] = cells[i] - avg;
            mass += std::abs(b[i]);
        }
        // f constant on I up to the rounding of its mean: the bad part is zero.
        if (mass <= 64.0 * std::numeric_limits<double>::epsilon() * avg * static_cast<double>(I.cell_count))
            std::fill(b.begin(), b.end(), 0.0);
        for (std::size_t i = 0; i < I.cell_count; ++i) g[I.first_cell + i] = avg;
        d.bad_parts.emplace_back(Grid(I.left, h, b.size()), std::move(b));
    }
    d.good = Signal(W, std::move(g));
}

[[nodiscard]] inline std::pair<Signal, std::vector<Signal>> good_bad_split(const Signal& f, const CZDecomposition& d) {
    CZDecomposition copy = d;
    good_bad_split_into(f, copy);
    return {copy.good, copy.bad_parts};
}

/// Measure of a union of intervals [left, left + length).
[[nodiscard]] inline double union_length(std::vector<std::pair<double, double>> spans) {
    std::sort(spans.begin(), spans.end());
    double total = 0.0, lo = 0.0, hi = 0.0;
    bool open = false;
    for (const auto& [a, b] : spans) {
        if (!open || a > hi) {
            if (open) total += hi - lo;
            lo = a;
            hi = b;
            open = true;
        } else {
            hi = std::max(hi, b);
        }
    }
    if (open) total += hi - lo;
    return total;
}

/// Omega* = union of the doubled intervals, as [a, b) spans.
[[nodiscard]] inline std::vector<std::pair<double, double>> doubled_spans(const CZDecomposition& d) {
    std::vector<std::pair<double, double>> s;
    for (const auto& I : d.selected) {
        const auto D = I.doubled();
        s.emplace_back(D.left, D.right());
    }
    return s;
}

// ---------------------------------------------------------------------------
// Verifiers

/// Every CZDecomposition invariant, measured against f. Measures get one cell of slack.
[[nodiscard]] inline std::vector<BoundReport> verify_decomposition(const Signal& f, const CZDecomposition& d) {
    std::vector<BoundReport> out;
    const double lambda = d.height;
    const double h = f.grid().spacing();
    const double f1 = lp_norm(f, 1.0);

    // (iii): lambda < avg <= 2 lambda, as counts of offending intervals.
    std::size_t low = 0, high = 0;
    double max_avg = 0.0;
    for (const auto& I : d.selected) {
        if (!(I.average > lambda)) ++low;
        if (!(I.average <= 2.0 * lambda)) ++high;
        max_avg = std::max(max_avg, I.average);
    }
    out.push_back(BoundReport::make("cz.average_above_lambda", static_cast<double>(low), 0.0, 0.0, 0.0,
                                    {{"lambda", lambda}}));
    out.push_back(BoundReport::make("cz.average_at_most_2lambda", static_cast<double>(high), 0.0, 0.0, 0.0,
                                    {{"lambda", lambda}, {"max_average", max_avg}}));

    // (ii)
    out.push_back(BoundReport::make("cz.omega_length", d.omega_length, f1 / lambda, 0.0, h,
                                    {{"lambda", lambda}, {"f_l1", f1}}));

    // (i): f <= lambda at every grid point outside Omega.
    std::vector<bool> in_omega(d.working_grid.size(), false);
    for (const auto& I : d.selected)
        for (std::size_t i = 0; i < I.cell_count; ++i) in_omega[I.first_cell + i] = true;
    double worst_outside = 0.0;
    for (std::size_t j = 0; j < f.size(); ++j)
        if (!in_omega[j]) worst_outside = std::max(worst_outside, f[j]);
    out.push_back(BoundReport::make("cz.bounded_outside_omega", worst_outside, lambda));

    // Almost disjoint: selected intervals are sorted, so neighbours must not overlap.
    double overlap = 0.0;
    for (std::size_t k = 1; k < d.selected.size(); ++k)
        overlap = std::max(overlap, static_cast<double>(d.selected[k - 1].first_cell + d.selected[k - 1].cell_count) -
                                        static_cast<double>(d.selected[k].first_cell));
    out.push_back(BoundReport::make("cz.almost_disjoint", std::max(overlap, 0.0), 0.0));

    // Reconstruction g + sum b_k = f.
    std::vector<double> sum(d.good.values().begin(), d.good.values().end());
    for (const auto& b : d.bad_parts) {
        const long off = cell_offset(b.grid(), d.working_grid);
        for (std::size_t i = 0; i < b.size(); ++i) {
            const long k = off + static_cast<long>(i);
            if (k >= 0 && k < static_cast<long>(sum.size())) sum[static_cast<std::size_t>(k)] += b[i];
        }
    }
    double recon = 0.0;
    for (std::size_t j = 0; j < sum.size(); ++j) recon = std::max(recon, std::abs(sum[j] - (j < f.size() ? f[j] : 0.0)));
    const double scale = sup_norm(f);
    out.push_back(BoundReport::make("cz.reconstruction", recon, 1e-12 * scale, 0.0, 0.0, {{"sup_f", scale}}));

    out.push_back(BoundReport::make("cz.good_sup", sup_norm(d.good), 2.0 * lambda, 1e-15, 0.0, {{"lambda", lambda}}));

    double worst_mean = 0.0, b1 = 0.0;
    for (const auto& b : d.bad_parts) {
        const double m = lp_norm(b, 1.0);
        b1 += m;
        if (m > 0.0) worst_mean = std::max(worst_mean, std::abs(integral(b)) / m);
    }
    out.push_back(BoundReport::make("cz.bad_mean_zero", worst_mean, 1e-9));
    out.push_back(BoundReport::make("cz.bad_l1", b1, 2.0 * f1, 1e-12, 0.0));
    return out;
}

/// (B1): int |g|^2 <= |g|_inf |g|_1, exactly.
[[nodiscard]] inline BoundReport good_energy_check(const Signal& g) {
    const double l2 = lp_norm(g, 2.0);
    return BoundReport::make("B1.good_energy", l2 * l2, sup_norm(g) * lp_norm(g, 1.0), 1e-12, 0.0);
}

/// (B2): int over R \ 2I of |H b| <= (2/pi) |b|_1, with H b evaluated exactly for the step
/// function b and the two half-lines integrated by quadrature.
[[nodiscard]] inline BoundReport bad_tail_bound_check(const Signal& b, const DyadicInterval& I) {
    const double b1 = lp_norm(b, 1.0);
    const double mean = integral(b);
    if (std::abs(mean) > 1e-9 * b1)
        throw precondition_error("bad_tail_bound_check: bad part has nonzero mean " + std::to_string(mean));
    const double h = b.grid().spacing();
    for (std::size_t j = 0; j < b.size(); ++j) {
        const double x = b.grid().x(j);
        if (b[j] != 0.0 && (x < I.left - 1e-9 * h || x + h > I.right() + 1e-9 * h))
            throw precondition_error("bad_tail_bound_check: bad part not supported in its interval");
    }
    const double rhs = 2.0 / pi * b1;
    nlohmann::json ctx{{"left", I.left}, {"length", I.length}, {"b_l1", b1}};
    if (b1 == 0.0) return BoundReport::make("B2.bad_tail", 0.0, rhs, 0.0, 0.0, ctx);
    const auto D = I.doubled();
    const double lhs = exterior_lp_integral(StepTransform(b), 1.0, D.left, D.right());
    return BoundReport::make("B2.bad_tail", lhs, rhs, 0.0, 0.0, ctx);
}

namespace detail {

/// Number of maximal runs of consecutive true entries.
inline std::size_t count_runs(const std::vector<bool>& mask) {
    std::size_t runs = 0;
    for (std::size_t j = 0; j < mask.size(); ++j)
        if (mask[j] && (j == 0 || !mask[j - 1])) ++runs;
    return runs;
}

}  // namespace detail

/// D_{f+g}(alpha) <= D_f(alpha/2) + D_g(alpha/2) on the transforms, one cell of slack.
[[nodiscard]] inline BoundReport distribution_subadditivity(const Signal& Hsum, const Signal& Hf, const Signal& Hg,
                                                            double alpha, std::string name) {
    const double lhs = distribution_at(Hsum, alpha);
    const double rhs = distribution_at(Hf, 0.5 * alpha) + distribution_at(Hg, 0.5 * alpha);
    return BoundReport::make(std::move(name), lhs, rhs, 0.0, Hsum.grid().spacing(), {{"alpha", alpha}});
}

struct WeakPipelineReport {
    BoundReport summary;             // lhs = lambda D_{Hf}(lambda) / |f|_1, rhs = the assembled constant
    std::vector<BoundReport> terms;  // every inequality of the chain, as measured
};

/// Constant of the assembled chain: 8 (Chebyshev + B1 on g) + 2 (Omega*) + 8/pi (B2 on b).
inline constexpr double weak_pipeline_constant = 10.0 + 8.0 / pi;

/// Runs the weak-(1,1) argument on f at height lambda: decompose, split, transform g and b,
/// and measure each term of the chain. The transform grid extends f's by
/// 4 |f|_1 / (pi lambda) on each side, which contains every superlevel set involved.
[[nodiscard]] inline WeakPipelineReport weak_bound_pipeline(const Signal& f, double lambda,
                                                            const TransformHandle& transform) {
    WeakPipelineReport rep;
    const double f1 = lp_norm(f, 1.0);
    const double h = f.grid().spacing();
    nlohmann::json ctx{{"lambda", lambda}, {"f_l1", f1}, {"spacing", h}};
    if (!(lambda > 0.0) || !std::isfinite(lambda)) throw domain_error("weak_bound_pipeline: lambda must be positive");
    if (f1 == 0.0) {
        for (const char* n : {"weak.chebyshev_good", "B1.good_energy", "weak.omega", "weak.omega_star", "weak.bad_outside",
                              "weak.subadditivity", "weak.assembly"})
            rep.terms.push_back(BoundReport::make(n, 0.0, 0.0));
        rep.summary = BoundReport::make("weak11", 0.0, weak_pipeline_constant, 0.0, 0.0, ctx);
        return rep;
    }

    const auto d = cz_decompose(f, lambda);
    const auto margin = static_cast<std::size_t>(std::ceil(4.0 * f1 / (pi * lambda) / h)) + 4;
    const Grid T(d.working_grid.origin() - static_cast<double>(margin) * h, h, d.working_grid.size() + 2 * margin);
    const Signal fT = embed(f, T);
    const Signal gT = embed(d.good, T);
    const Signal Hf = transform(fT);
    const Signal Hg = transform(gT);
    const Signal Hb = Hf - Hg;

    const double half = 0.5 * lambda;
    auto mask_of = [&](const Signal& s, double level) {
        std::vector<bool> m(s.size());
        for (std::size_t j = 0; j < s.size(); ++j) m[j] = std::abs(s[j]) >= level;
        return m;
    };
    const auto mf = mask_of(Hf, lambda);
    const auto mg = mask_of(Hg, half);
    const auto mb = mask_of(Hb, half);

    // Omega* membership of each cell midpoint.
    const auto spans = doubled_spans(d);
    std::vector<bool> in_star(T.size(), false);
    for (const auto& [a, b] : spans) {
        const double s = (a - T.origin()) / h - 0.5;
        const double e = (b - T.origin()) / h - 0.5;
        const long j0 = std::max<long>(0, static_cast<long>(std::ceil(s)));
        const long j1 = std::min<long>(static_cast<long>(T.size()), static_cast<long>(std::ceil(e)));
        for (long j = j0; j < j1; ++j) in_star[static_cast<std::size_t>(j)] = true;
    }
    std::vector<bool> mb_out(T.size());
    for (std::size_t j = 0; j < T.size(); ++j) mb_out[j] = mb[j] && !in_star[j];

    auto measure = [&](const std::vector<bool>& m) {
        return h * static_cast<double>(std::count(m.begin(), m.end(), true));
    };
    const double D_f = measure(mf);
    const double D_g = measure(mg);
    const double D_b = measure(mb);
    const double D_b_out = measure(mb_out);
    const double omega_star = union_length(spans);
    const double g2 = std::pow(lp_norm(d.good, 2.0), 2);
    double b1 = 0.0;
    for (const auto& b : d.bad_parts) b1 += lp_norm(b, 1.0);

    auto slack = [&](const std::vector<bool>& m) { return h * static_cast<double>(detail::count_runs(m)); };

    rep.terms.push_back(BoundReport::make("weak.chebyshev_good", D_g, 4.0 / (lambda * lambda) * g2, 0.0, slack(mg), ctx));
    rep.terms.push_back(good_energy_check(d.good));
    rep.terms.push_back(BoundReport::make("weak.omega", d.omega_length, f1 / lambda, 0.0, h, ctx));
    rep.terms.push_back(BoundReport::make("weak.omega_star", omega_star, 2.0 * d.omega_length, 1e-12, 0.0, ctx));
    for (std::size_t k = 0; k < d.bad_parts.size(); ++k) {
        auto r = bad_tail_bound_check(d.bad_parts[k], d.selected[k]);
        r.context["k"] = k;
        rep.terms.push_back(std::move(r));
    }
    rep.terms.push_back(
        BoundReport::make("weak.bad_outside", D_b_out, 4.0 / (pi * lambda) * b1, 0.0, slack(mb_out), ctx));
    rep.terms.push_back(BoundReport::make("weak.subadditivity", D_f, D_g + D_b, 0.0, h, ctx));
    rep.terms.push_back(BoundReport::make("weak.assembly", D_f, D_g + omega_star + D_b_out, 0.0,
                                          h * static_cast<double>(spans.size() + 1), ctx));

    const double ratio = lambda * D_f / f1;
    ctx["D_Hf"] = D_f;
    ctx["D_Hg_half"] = D_g;
    ctx["D_Hb_half"] = D_b;
    ctx["intervals"] = d.selected.size();
    rep.summary = BoundReport::make("weak11", ratio, weak_pipeline_constant, 0.0, 0.0, ctx);
    rep.summary.pass = rep.summary.pass && all_pass(rep.terms);
    return rep;
}

}  // namespace hilbert
