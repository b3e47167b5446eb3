#pragma once

// Command-line front end. run() returns 0 on success, 1 when a verification fails and
// 2 on usage or input errors.

#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "hilbert/hilbert.hpp"

namespace hilbert::cli {

inline constexpr const char* version = "0.1.0";

namespace detail {

inline void emit(const std::string& path, const std::string& content, std::ostream& out) {
    if (path.empty() || path == "-")
        out << content;
    else
        csv::atomic_write(path, content);
}

/// bad_{k}.csv -> bad_3.csv; bad_k.csv -> bad_3.csv; bad.csv -> bad_3.csv.
inline std::string bad_path(const std::string& pattern, std::size_t k) {
    const auto ks = std::to_string(k);
    if (auto pos = pattern.find("{k}"); pos != std::string::npos)
        return pattern.substr(0, pos) + ks + pattern.substr(pos + 3);
    const std::filesystem::path p(pattern);
    auto stem = p.stem().string();
    if (stem.size() >= 2 && stem.compare(stem.size() - 2, 2, "_k") == 0)
        stem.resize(stem.size() - 1);
    else
        stem += "_";
    return (p.parent_path() / (stem + ks + p.extension().string())).string();
}

inline std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream in(s);
    std::string item;
    while (std::getline(in, item, ','))
        if (!item.empty()) out.push_back(item);
    return out;
}

struct TransformArgs {
    std::string method;
    std::string input;
    std::string output;
    std::optional<double> epsilon_start;
    std::optional<std::size_t> epsilon_steps;
    std::optional<double> cutoff;
    std::size_t padding = 4;
    double tolerance = 1e-6;
    std::string kind = "indicator";
    double a = 0.0;
    double b = 1.0;
    double omega = 1.0;
};

inline int run_transform(const TransformArgs& t, std::ostream& out) {
    const Signal f = csv::read_signal(t.input);
    std::ostringstream s;
    if (t.method == "pv") {
        PVConfig cfg = default_pv_config(f.grid(), f.grid(), t.tolerance);
        if (t.epsilon_start || t.epsilon_steps) {
            const double start = t.epsilon_start.value_or(cfg.epsilons.front());
            std::size_t steps = t.epsilon_steps.value_or(0);
            if (!t.epsilon_steps)
                for (double e = start; e >= f.grid().spacing() * (1.0 - 1e-12); e *= 0.5) ++steps;
            cfg = make_pv_config(f.grid(), f.grid(), start, steps, t.cutoff, t.tolerance);
        } else if (t.cutoff) {
            cfg.outer_cutoff = *t.cutoff;
        }
        const auto res = hilbert_pv(f, f.grid(), cfg);
        std::vector<csv::Column> cols{{"h_value", {}}, {"converged", {}}, {"est_error", {}}};
        for (std::size_t j = 0; j < f.size(); ++j) {
            cols[0].cells.push_back(csv::format(res.transform[j]));
            cols[1].cells.emplace_back(res.converged[j] ? "1" : "0");
            cols[2].cells.push_back(csv::format(res.estimated_error[j]));
        }
        csv::write_signal(s, f, cols);
    } else if (t.method == "spectral") {
        SpectralConfig cfg;
        cfg.padding_factor = t.padding;
        const auto hf = hilbert_spectral(f, cfg);
        csv::Column col{"h_value", {}};
        for (double v : hf.values()) col.cells.push_back(csv::format(v));
        csv::write_signal(s, f, {col});
    } else {
        ClosedFormKind kind = Indicator{t.a, t.b};
        if (t.kind == "cosine") kind = Cosine{t.omega};
        if (t.kind == "sine") kind = Sine{t.omega};
        const auto res = hilbert_closed_form(kind, f.grid());
        std::vector<csv::Column> cols{{"h_value", {}}, {"singular", {}}};
        for (std::size_t j = 0; j < f.size(); ++j) {
            cols[0].cells.push_back(res.singular[j] ? "nan" : csv::format(res.transform[j]));
            cols[1].cells.emplace_back(res.singular[j] ? "1" : "0");
        }
        csv::write_signal(s, f, cols);
    }
    emit(t.output, s.str(), out);
    return 0;
}

inline nlohmann::json intervals_json(const CZDecomposition& d) {
    auto list = nlohmann::json::array();
    for (const auto& I : d.selected)
        list.push_back({{"left", I.left}, {"length", I.length}, {"generation", I.generation}, {"average", I.average}});
    return list;
}

inline int run_czd(double lambda, const std::string& input, const std::vector<std::string>& emit_paths,
                   std::ostream& out, std::ostream& err) {
    const Signal f = csv::read_signal(input);
    const auto d = cz_decompose(f, lambda);
    const auto checks = verify_decomposition(f, d);
    if (emit_paths.empty()) {
        out << intervals_json(d).dump(2) << '\n';
    } else {
        csv::write_signal(emit_paths[0], d.good);
        for (std::size_t k = 0; k < d.bad_parts.size(); ++k) csv::write_signal(bad_path(emit_paths[1], k), d.bad_parts[k]);
        csv::atomic_write(emit_paths[2], intervals_json(d).dump(2) + "\n");
    }
    bool ok = true;
    for (const auto& c : checks)
        if (!c.pass) {
            ok = false;
            err << "czd: invariant " << c.name << " failed (lhs " << csv::format(c.lhs) << ", rhs " << csv::format(c.rhs)
                << ")\n";
        }
    return ok ? 0 : 1;
}

inline int run_verify(const std::string& input, const std::string& checks, const std::string& json_path,
                      std::ostream& out, std::ostream& err) {
    const Signal f = csv::read_signal(input);
    ReportConfig cfg;
    if (checks != "all") cfg.checks = split_list(checks);
    const auto reports = full_report(f, cfg);
    nlohmann::json j = reports;
    if (json_path.empty())
        out << j.dump(2) << '\n';
    else
        csv::atomic_write(json_path, j.dump(2) + "\n");
    std::size_t failed = 0;
    for (const auto& r : reports)
        if (!r.pass) {
            ++failed;
            err << "verify: " << r.name << " failed: lhs " << csv::format(r.lhs) << " > rhs " << csv::format(r.rhs) << '\n';
        }
    if (!json_path.empty()) out << reports.size() - failed << "/" << reports.size() << " checks passed\n";
    return failed == 0 ? 0 : 1;
}

inline int run_dist(const std::string& input, const std::string& thresholds, std::size_t levels,
                    const std::string& output, std::ostream& out) {
    const Signal f = csv::read_signal(input);
    std::vector<double> alphas;
    if (!thresholds.empty()) {
        for (const auto& t : split_list(thresholds)) alphas.push_back(csv::detail::parse_number(t, 1, 1));
    } else {
        if (levels == 0) throw config_error("dist: --levels must be positive");
        const double top = sup_norm(f);
        if (top == 0.0) throw domain_error("dist: zero signal has no threshold range; pass --thresholds");
        for (std::size_t i = 1; i <= levels; ++i) alphas.push_back(top * static_cast<double>(i) / static_cast<double>(levels));
    }
    const auto curve = distribution_function(f, alphas);
    std::ostringstream s;
    s << "alpha,measure\n";
    for (std::size_t i = 0; i < alphas.size(); ++i)
        s << csv::format(curve.thresholds[i]) << ',' << csv::format(curve.measures[i]) << '\n';
    emit(output, s.str(), out);
    return 0;
}

}  // namespace detail

inline int run(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
    CLI::App app{"Hilbert transform toolkit"};
    app.name("hilbert");
    app.set_version_flag("--version", std::string("hilbert ") + version);
    app.require_subcommand(1);

    detail::TransformArgs t;
    auto* tr = app.add_subcommand("transform", "Hilbert transform of a signal CSV");
    tr->add_option("--method", t.method, "pv, spectral or closed-form")
        ->required()
        ->check(CLI::IsMember({"pv", "spectral", "closed-form"}));
    tr->add_option("--input", t.input, "signal CSV (x,value)")->required();
    tr->add_option("--output", t.output, "output CSV (default stdout)");
    tr->add_option("--epsilon-start", t.epsilon_start, "first PV truncation radius")->check(CLI::PositiveNumber);
    tr->add_option("--epsilon-steps", t.epsilon_steps, "number of halvings of epsilon")->check(CLI::Range(2, 60));
    tr->add_option("--cutoff", t.cutoff, "PV outer cutoff R")->check(CLI::PositiveNumber);
    tr->add_option("--padding", t.padding, "spectral zero-padding factor")->capture_default_str()->check(CLI::Range(2, 64));
    tr->add_option("--tol", t.tolerance, "PV convergence tolerance")->capture_default_str()->check(CLI::PositiveNumber);
    tr->add_option("--kind", t.kind, "closed form: indicator, cosine or sine")
        ->capture_default_str()
        ->check(CLI::IsMember({"indicator", "cosine", "sine"}));
    tr->add_option("--a", t.a, "indicator left end")->capture_default_str();
    tr->add_option("--b", t.b, "indicator right end")->capture_default_str();
    tr->add_option("--omega", t.omega, "frequency of the cosine/sine")->capture_default_str();

    double lambda = 0.0;
    std::string cz_input;
    std::vector<std::string> emit_paths;
    auto* cz = app.add_subcommand("czd", "Calderon-Zygmund decomposition at height lambda");
    cz->add_option("--lambda", lambda, "height")->required()->check(CLI::PositiveNumber);
    cz->add_option("--input", cz_input, "nonnegative signal CSV")->required();
    cz->add_option("--emit", emit_paths, "good.csv bad_k.csv intervals.json")->expected(3);

    std::string v_input, v_checks = "all", v_json;
    auto* ver = app.add_subcommand("verify", "run the verification battery");
    ver->add_option("--input", v_input, "signal CSV")->required();
    ver->add_option("--checks", v_checks, "comma-separated checks or 'all'")->capture_default_str();
    ver->add_option("--json", v_json, "write the JSON report here instead of stdout");

    std::string d_input, d_thresholds, d_output;
    std::size_t d_levels = 64;
    auto* dist = app.add_subcommand("dist", "distribution function alpha -> |{|f| >= alpha}|");
    dist->add_option("--input", d_input, "signal CSV")->required();
    auto* th = dist->add_option("--thresholds", d_thresholds, "comma-separated increasing thresholds");
    dist->add_option("--levels", d_levels, "uniform thresholds up to max|f|")->capture_default_str()->excludes(th);
    dist->add_option("--output", d_output, "output CSV (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? 0 : 2;
    }

    try {
        if (*tr) return detail::run_transform(t, out);
        if (*cz) return detail::run_czd(lambda, cz_input, emit_paths, out, err);
        if (*ver) return detail::run_verify(v_input, v_checks, v_json, out, err);
        if (*dist) return detail::run_dist(d_input, d_thresholds, d_levels, d_output, out);
    } catch (const std::exception& e) {
        err << "hilbert: " << e.what() << '\n';
        return 2;
    }
    return 2;
}

}  // namespace hilbert::cli
