#pragma once

#include <cmath>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

namespace hilbert {

/// Outcome of one measured inequality `lhs <= rhs`.
///
/// `pass` is decided at construction from the declared slack:
///   pass <=> lhs <= rhs * (1 + rel_slack) + abs_slack.
/// The slacks are written into `context` so a report is self-describing.
struct BoundReport {
    std::string name;
    double lhs = 0.0;
    double rhs = 0.0;
    double ratio = 0.0;
    bool pass = false;
    nlohmann::json context = nlohmann::json::object();

    static BoundReport make(std::string name, double lhs, double rhs, double rel_slack = 0.0,
                            double abs_slack = 0.0, nlohmann::json context = nlohmann::json::object()) {
        BoundReport r;
        r.name = std::move(name);
        r.lhs = lhs;
        r.rhs = rhs;
        if (rhs != 0.0) {
            r.ratio = lhs / rhs;
        } else {
            r.ratio = lhs == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
        }
        r.pass = std::isfinite(lhs) && std::isfinite(rhs) && lhs <= rhs * (1.0 + rel_slack) + abs_slack;
        r.context = std::move(context);
        r.context["rel_slack"] = rel_slack;
        r.context["abs_slack"] = abs_slack;
        return r;
    }
};

inline void to_json(nlohmann::json& j, const BoundReport& r) {
    auto num = [](double v) -> nlohmann::json {
        if (std::isfinite(v)) return v;
        return v > 0 ? "inf" : (v < 0 ? "-inf" : "nan");
    };
    j = nlohmann::json{{"name", r.name}, {"lhs", num(r.lhs)},   {"rhs", num(r.rhs)},
                       {"ratio", num(r.ratio)}, {"pass", r.pass}, {"context", r.context}};
}

[[nodiscard]] inline bool all_pass(const std::vector<BoundReport>& reports) {
    for (const auto& r : reports)
        if (!r.pass) return false;
    return true;
}

}  // namespace hilbert
