#pragma once

// Height splits, duality and skew-adjointness checks, the strong-(p,p) ratio estimator,
// and the full verification battery.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "hilbert/czd.hpp"
#include "hilbert/error.hpp"
#include "hilbert/grid.hpp"
#include "hilbert/report.hpp"
#include "hilbert/transform.hpp"

namespace hilbert {

struct HeightSplit {
    double height = 0.0;
    double p = 0.0;
    Signal spike;  // f where |f| > height
    Signal tail;   // f where |f| <= height
    std::vector<BoundReport> bounds;
};

[[nodiscard]] inline HeightSplit height_split(const Signal& f, double lambda, double p) {
    if (!(lambda > 0.0) || !std::isfinite(lambda)) throw domain_error("height_split: lambda must be positive");
    if (!(p > 1.0 && p < 2.0)) throw domain_error("height_split: p must lie in (1, 2)");
    std::vector<double> spike(f.size(), 0.0), tail(f.size(), 0.0);
    for (std::size_t j = 0; j < f.size(); ++j) (std::abs(f[j]) > lambda ? spike : tail)[j] = f[j];
    HeightSplit s{lambda, p, Signal(f.grid(), std::move(spike)), Signal(f.grid(), std::move(tail)), {}};

    const double fp = std::pow(lp_norm(f, p), p);
    const double t2 = lp_norm(s.tail, 2.0);
    nlohmann::json ctx{{"lambda", lambda}, {"p", p}};
    s.bounds.push_back(BoundReport::make("height_split.spike_l1", lp_norm(s.spike, 1.0), std::pow(lambda, 1.0 - p) * fp,
                                         1e-12, 0.0, ctx));
    s.bounds.push_back(
        BoundReport::make("height_split.tail_l2", t2 * t2, std::pow(lambda, 2.0 - p) * fp, 1e-12, 0.0, ctx));
    return s;
}

/// D_{H(f+g)}(alpha) <= D_{Hf}(alpha/2) + D_{Hg}(alpha/2).
[[nodiscard]] inline BoundReport subadditivity_check(const Signal& f, const Signal& g, double alpha,
                                                     const TransformHandle& transform) {
    require_compatible(f.grid(), g.grid(), "subadditivity_check");
    if (!(alpha > 0.0) || !std::isfinite(alpha)) throw domain_error("subadditivity_check: alpha must be positive");
    return distribution_subadditivity(transform(f + g), transform(f), transform(g), alpha, "subadditivity");
}

/// sup over the corpus of |Hf|_p / |f|_p, |Hf|_p taken over the whole line (see line_lp_norm).
/// Passes iff the sup is finite; there is no known constant to compare against.
[[nodiscard]] inline BoundReport strong_pp_estimate(const std::vector<Signal>& corpus, double p,
                                                    const TransformHandle& transform) {
    if (!(p > 1.0) || !std::isfinite(p)) throw domain_error("strong_pp_estimate: p must lie in (1, inf)");
    if (corpus.empty()) throw domain_error("strong_pp_estimate: empty corpus");
    double sup = 0.0;
    std::vector<double> ratios;
    for (const auto& f : corpus) {
        const double n = lp_norm(f, p);
        if (n == 0.0) throw domain_error("strong_pp_estimate: corpus signals must be nonzero");
        const double r = line_lp_norm(f, transform(f), p) / n;
        ratios.push_back(r);
        sup = std::max(sup, r);
    }
    auto rep = BoundReport::make("strong_pp", sup, infinity, 0.0, 0.0, {{"p", p}, {"ratios", ratios}});
    rep.pass = std::isfinite(sup);
    return rep;
}

/// |<Hf, g> + <f, Hg>| <= 1e-8 |f|_2 |g|_2.
[[nodiscard]] inline BoundReport skew_adjoint_check(const Signal& f, const Signal& g, const TransformHandle& transform) {
    require_compatible(f.grid(), g.grid(), "skew_adjoint_check");
    const double lhs = std::abs(inner_product(transform(f), g) + inner_product(f, transform(g)));
    return BoundReport::make("skew_adjoint", lhs, 1e-8 * lp_norm(f, 2.0) * lp_norm(g, 2.0));
}

/// Extremal Hoelder witness sign(f) |f|^{q-1} / |f|_q^{q-1}, normalised in L^{q'}.
[[nodiscard]] inline Signal holder_witness(const Signal& f, double q) {
    const double m = sup_norm(f);
    if (m == 0.0) return Signal(f.grid());
    const double scaled_norm = lp_norm(f, q) / m;
    std::vector<double> v(f.size());
    for (std::size_t j = 0; j < f.size(); ++j) {
        const double a = std::abs(f[j]) / m;
        v[j] = std::copysign(std::pow(a, q - 1.0) / std::pow(scaled_norm, q - 1.0), f[j]);
        if (f[j] == 0.0) v[j] = 0.0;
    }
    return Signal(f.grid(), std::move(v));
}

/// max over the dual corpus (plus the witness) of |<f, g>|, a lower bound for |f|_q.
[[nodiscard]] inline BoundReport duality_norm_estimate(const Signal& f, double q, const std::vector<Signal>& dual_corpus) {
    if (!(q > 2.0) || !std::isfinite(q)) throw domain_error("duality_norm_estimate: q must lie in (2, inf)");
    const double p = q / (q - 1.0);
    double best = 0.0;
    for (std::size_t i = 0; i < dual_corpus.size(); ++i) {
        const auto& g = dual_corpus[i];
        if (std::abs(lp_norm(g, p) - 1.0) > 1e-9)
            throw precondition_error("duality_norm_estimate: dual signal " + std::to_string(i) + " is not normalised");
        best = std::max(best, std::abs(inner_product(f, g)));
    }
    const double fq = lp_norm(f, q);
    if (fq > 0.0) best = std::max(best, std::abs(inner_product(f, holder_witness(f, q))));
    auto rep = BoundReport::make("duality", best, fq, 1e-9, 0.0, {{"q", q}, {"dual_size", dual_corpus.size()}});
    rep.context["achieved_fraction"] = fq > 0.0 ? best / fq : 1.0;
    return rep;
}

/// (max(f, 0), max(-f, 0)).
[[nodiscard]] inline std::pair<Signal, Signal> signed_split(const Signal& f) {
    std::vector<double> pos(f.size()), neg(f.size());
    for (std::size_t j = 0; j < f.size(); ++j) {
        pos[j] = f[j] > 0.0 ? f[j] : 0.0;
        neg[j] = f[j] < 0.0 ? -f[j] : 0.0;
    }
    return {Signal(f.grid(), std::move(pos)), Signal(f.grid(), std::move(neg))};
}

// ---------------------------------------------------------------------------
// Full battery

inline const std::vector<std::string>& report_check_names() {
    static const std::vector<std::string> names{"isometry",    "method_agreement", "cz_pipeline", "weak11",
                                                "layer_cake",  "skew_adjoint",     "strong_pp"};
    return names;
}

struct ReportConfig {
    std::vector<std::string> checks;  // empty = all
    SpectralConfig spectral;
    double pv_tolerance = 1e-6;
    /// Tolerances for signals with jumps; auto-detected when unset.
    std::optional<bool> rough;
    /// lambda = 2^e * max|f| for each exponent.
    std::vector<int> lambda_exponents{-4, -3, -2, -1, 0, 1, 2};
    std::vector<double> strong_exponents{1.25, 1.5, 2.0, 3.0, 4.0};
    std::size_t layer_cake_points = 16384;
};

/// A jump is an adjacent difference above 5% of max|f|.
[[nodiscard]] inline std::vector<std::size_t> jump_indices(const Signal& f) {
    std::vector<std::size_t> out;
    const double m = sup_norm(f);
    for (std::size_t j = 0; j + 1 < f.size(); ++j)
        if (std::abs(f[j + 1] - f[j]) > 0.05 * m) out.push_back(j);
    return out;
}

namespace detail {

inline BoundReport summarize(std::string name, const std::vector<BoundReport>& parts, nlohmann::json ctx) {
    std::vector<std::string> failed;
    for (const auto& r : parts)
        if (!r.pass) failed.push_back(r.name);
    ctx["checked"] = parts.size();
    ctx["failed"] = failed;
    return BoundReport::make(std::move(name), static_cast<double>(failed.size()), 0.0, 0.0, 0.0, std::move(ctx));
}

}  // namespace detail

[[nodiscard]] inline std::vector<BoundReport> full_report(const Signal& f, const ReportConfig& cfg = {}) {
    std::set<std::string> want(cfg.checks.begin(), cfg.checks.end());
    if (want.empty() || want.count("all")) want = {report_check_names().begin(), report_check_names().end()};
    for (const auto& c : want)
        if (std::find(report_check_names().begin(), report_check_names().end(), c) == report_check_names().end())
            throw config_error("unknown check '" + c + "'");

    const auto jumps = jump_indices(f);
    const bool rough = cfg.rough.value_or(!jumps.empty());
    const double fmax = sup_norm(f);
    const double h = f.grid().spacing();
    const auto spectral = spectral_handle(cfg.spectral);
    nlohmann::json base{{"rough", rough}, {"n", f.size()}, {"spacing", h}};
    std::vector<BoundReport> out;

    std::optional<Signal> Hf;
    auto hf = [&]() -> const Signal& {
        if (!Hf) Hf = hilbert_spectral(f, cfg.spectral);
        return *Hf;
    };

    if (want.count("isometry")) {
        const double tol = rough ? 1e-2 : 1e-6;
        const double n2 = lp_norm(f, 2.0);
        const double dev = n2 == 0.0 ? 0.0 : std::abs(line_lp_norm(f, hf(), 2.0) / n2 - 1.0);
        auto ctx = base;
        ctx["tolerance"] = tol;
        out.push_back(BoundReport::make("isometry", dev, tol, 0.0, 0.0, ctx));
    }

    if (want.count("method_agreement")) {
        auto ctx = base;
        // Worst ratio |PV - spectral| / max(floor * max|f|, PV error estimate) over the compared points.
        double worst = 0.0;
        std::size_t compared = 0, unconverged = 0;
        if (fmax > 0.0) {
            const auto pv = hilbert_pv(f, f.grid(), default_pv_config(f.grid(), f.grid(), cfg.pv_tolerance));
            const std::size_t n = f.size();
            const double floor_tol = (rough ? 1e-2 : 1e-3) * fmax;
            // Interior half, and at least 64 cells from every jump: the spectral transform of a
            // sampled jump carries an odd/even ripple of size 1 / (pi d) at d cells.
            for (std::size_t j = n / 4; j < 3 * n / 4; ++j) {
                bool near = false;
                for (auto k : jumps)
                    if (std::abs(static_cast<double>(j) - (static_cast<double>(k) + 0.5)) < 64.0) near = true;
                if (near) continue;
                ++compared;
                if (!pv.converged[j]) ++unconverged;
                const double allowed = std::max(floor_tol, pv.estimated_error[j]);
                worst = std::max(worst, std::abs(pv.transform[j] - hf()[j]) / allowed);
            }
        }
        ctx["compared"] = compared;
        ctx["unconverged"] = unconverged;
        out.push_back(BoundReport::make("method_agreement", worst, 1.0, 0.0, 0.0, ctx));
    }

    const auto [fplus, fminus] = signed_split(f);
    const std::pair<const char*, const Signal*> parts[] = {{"positive", &fplus}, {"negative", &fminus}};

    if (want.count("cz_pipeline") || want.count("weak11")) {
        for (const auto& [label, part] : parts) {
            const double pmax = sup_norm(*part);
            if (pmax == 0.0 && part != &fplus) continue;
            for (int e : cfg.lambda_exponents) {
                const double lambda = std::ldexp(pmax > 0.0 ? pmax : 1.0, e);
                auto ctx = base;
                ctx["part"] = label;
                ctx["lambda"] = lambda;
                if (want.count("cz_pipeline")) {
                    std::vector<BoundReport> rs;
                    if (pmax > 0.0) {
                        const auto d = cz_decompose(*part, lambda);
                        rs = verify_decomposition(*part, d);
                        for (std::size_t k = 0; k < d.bad_parts.size(); ++k)
                            rs.push_back(bad_tail_bound_check(d.bad_parts[k], d.selected[k]));
                        ctx["intervals"] = d.selected.size();
                    }
                    out.push_back(detail::summarize("cz_pipeline", rs, ctx));
                }
                if (want.count("weak11")) {
                    // Rough signals are step functions: transform them exactly.
                    const auto handle = rough ? step_handle() : spectral;
                    auto w = weak_bound_pipeline(*part, lambda, handle);
                    std::vector<std::string> failed;
                    for (const auto& t : w.terms)
                        if (!t.pass) failed.push_back(t.name);
                    w.summary.context["part"] = label;
                    w.summary.context["failed_terms"] = failed;
                    out.push_back(std::move(w.summary));
                }
            }
        }
    }

    if (want.count("layer_cake")) {
        for (double p : {1.0, 2.0, 3.0}) {
            const double lp = lp_norm(f, p);
            const double lc = layer_cake_norm(f, p, cfg.layer_cake_points);
            auto ctx = base;
            ctx["p"] = p;
            ctx["quadrature_points"] = cfg.layer_cake_points;
            out.push_back(BoundReport::make("layer_cake", std::abs(lc - lp) / std::max(lp, 1e-12), 1e-3, 0.0, 0.0, ctx));
        }
    }

    if (want.count("skew_adjoint")) {
        // Partners: the reflection, a one-cell shift and a modulation of f.
        const std::size_t n = f.size();
        std::vector<double> rev(n), shift(n, 0.0), mod(n);
        for (std::size_t j = 0; j < n; ++j) {
            rev[j] = f[n - 1 - j];
            if (j + 1 < n) shift[j + 1] = f[j];
            mod[j] = f[j] * std::cos(2.0 * pi * static_cast<double>(j) / 64.0);
        }
        for (auto* v : {&rev, &shift, &mod}) {
            auto r = skew_adjoint_check(f, Signal(f.grid(), *v), spectral);
            r.context.update(base);
            out.push_back(std::move(r));
        }
    }

    if (want.count("strong_pp")) {
        for (double p : cfg.strong_exponents) {
            auto ctx = base;
            ctx["p"] = p;
            if (fmax == 0.0) {
                out.push_back(BoundReport::make("strong_pp", 0.0, infinity, 0.0, 0.0, ctx));
                out.back().pass = true;
                continue;
            }
            auto r = strong_pp_estimate({f}, p, spectral);
            r.context.update(ctx);
            if (p == 2.0) {
                // Here the constant is known: the transform is an isometry.
                const double tol = rough ? 1e-2 : 1e-6;
                r.rhs = 1.0 + tol;
                r.context["tolerance"] = tol;
                r.pass = std::abs(r.lhs - 1.0) <= tol;
                r.ratio = r.lhs / r.rhs;
            }
            out.push_back(std::move(r));
        }
    }
    return out;
}

}  // namespace hilbert
