#pragma once

// Signal CSV interchange: header `x,value`, one sample per row, strictly
// increasing and uniformly spaced x.

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <istream>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <utility>
#include <vector>

#include "hilbert/error.hpp"
#include "hilbert/grid.hpp"

namespace hilbert::csv {

inline constexpr double spacing_tolerance = 1e-9;

/// Shortest representation that parses back to the same double.
inline std::string format(double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    if (ec != std::errc{}) throw error("failed to format number");
    return std::string(buf, ptr);
}

namespace detail {

inline std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

inline double parse_number(std::string_view field, std::size_t line, std::size_t column) {
    const auto t = trim(field);
    if (t.empty()) throw parse_error("empty field", line, column);
    double v = 0.0;
    const char* first = t.data();
    if (*first == '+') ++first;
    auto [ptr, ec] = std::from_chars(first, t.data() + t.size(), v);
    if (ec != std::errc{} || ptr != t.data() + t.size())
        throw parse_error("not a number: '" + std::string(t) + "'", line, column);
    if (!std::isfinite(v)) throw parse_error("non-finite value '" + std::string(t) + "'", line, column);
    return v;
}

/// Recovers a spacing h with origin + j * h == x_j bit-for-bit when the file was
/// written from a grid; otherwise returns the endpoint estimate.
inline double recover_spacing(const std::vector<double>& xs) {
    const std::size_t n = xs.size();
    const double estimate = (xs.back() - xs.front()) / static_cast<double>(n - 1);
    auto reproduces = [&](double h) {
        for (std::size_t j = 0; j < n; ++j)
            if (xs.front() + static_cast<double>(j) * h != xs[j]) return false;
        return true;
    };
    // Rounding of the largest |x| blurs h by about ulp(x) / (n - 1).
    const double big = std::max(std::abs(xs.front()), std::abs(xs.back()));
    const double blur = (std::nextafter(big, infinity) - big) / (std::nextafter(estimate, infinity) - estimate);
    const int window = static_cast<int>(std::min(1e5, 8.0 + blur / static_cast<double>(n - 1)));
    double candidates[] = {estimate, xs[1] - xs[0]};
    for (double c : candidates) {
        double lo = c, hi = c;
        if (reproduces(c)) return c;
        for (int k = 0; k < window; ++k) {
            lo = std::nextafter(lo, -infinity);
            hi = std::nextafter(hi, infinity);
            if (reproduces(lo)) return lo;
            if (reproduces(hi)) return hi;
        }
    }
    return estimate;
}

}  // namespace detail

/// Reads the `x` column and the named value column; other columns are ignored.
inline Signal read_signal(std::istream& in, std::string_view column = "value") {
    std::string line;
    std::size_t line_no = 0;
    if (!std::getline(in, line)) throw parse_error("missing header 'x,value'", 1, 1);
    ++line_no;

    std::vector<std::string> header;
    {
        std::string_view rest = detail::trim(line);
        while (true) {
            const auto c = rest.find(',');
            header.emplace_back(detail::trim(rest.substr(0, c)));
            if (c == std::string_view::npos) break;
            rest = rest.substr(c + 1);
        }
    }
    if (header.size() < 2 || header[0] != "x") throw parse_error("expected header starting with 'x'", 1, 1);
    std::size_t col = 0;
    for (std::size_t i = 1; i < header.size(); ++i)
        if (header[i] == column) col = i;
    if (col == 0) throw parse_error("header has no column '" + std::string(column) + "'", 1, 1);

    std::vector<double> xs, vs;
    std::vector<std::size_t> rows;
    while (std::getline(in, line)) {
        ++line_no;
        const auto row = detail::trim(line);
        if (row.empty()) continue;
        std::vector<std::pair<std::string_view, std::size_t>> fields;  // text, 1-based column
        std::size_t start = 0;
        while (true) {
            const auto c = row.find(',', start);
            fields.emplace_back(row.substr(start, c == std::string_view::npos ? c : c - start), start + 1);
            if (c == std::string_view::npos) break;
            start = c + 1;
        }
        if (fields.size() != header.size())
            throw parse_error("expected " + std::to_string(header.size()) + " fields, found " + std::to_string(fields.size()),
                              line_no, 1);
        const double x = detail::parse_number(fields[0].first, line_no, fields[0].second);
        const double v = detail::parse_number(fields[col].first, line_no, fields[col].second);
        if (!xs.empty() && !(x > xs.back())) throw parse_error("x must be strictly increasing", line_no, 1);
        xs.push_back(x);
        vs.push_back(v);
        rows.push_back(line_no);
    }
    if (xs.size() < 2) throw parse_error("need at least 2 samples", line_no, 1);

    const double h = detail::recover_spacing(xs);
    // Blame the first row that breaks from the leading step.
    const double first = xs[1] - xs[0];
    for (std::size_t j = 1; j < xs.size(); ++j) {
        const double step = xs[j] - xs[j - 1];
        if (std::abs(step - h) > spacing_tolerance * h) {
            std::size_t k = 2;
            while (k < xs.size() && std::abs(xs[k] - xs[k - 1] - first) <= spacing_tolerance * first) ++k;
            throw parse_error("non-uniform spacing (step " + format(xs[k] - xs[k - 1]) + ", expected " + format(first) + ")",
                              rows[std::min(k, xs.size() - 1)], 1);
        }
    }
    return Signal(Grid(xs.front(), h, xs.size()), std::move(vs));
}

inline Signal read_signal(const std::filesystem::path& path, std::string_view column = "value") {
    std::ifstream in(path);
    if (!in) throw error("cannot open '" + path.string() + "'");
    return read_signal(in, column);
}

/// Extra per-sample columns appended after `x,value`.
struct Column {
    std::string name;
    std::vector<std::string> cells;
};

inline void write_signal(std::ostream& out, const Signal& f, const std::vector<Column>& extra = {}) {
    out << "x,value";
    for (const auto& c : extra) {
        if (c.cells.size() != f.size()) throw consistency_error("column '" + c.name + "' has the wrong length");
        out << ',' << c.name;
    }
    out << '\n';
    for (std::size_t j = 0; j < f.size(); ++j) {
        out << format(f.grid().x(j)) << ',' << format(f[j]);
        for (const auto& c : extra) out << ',' << c.cells[j];
        out << '\n';
    }
}

/// Writes `content` to a sibling temporary file and renames it over `path`.
inline void atomic_write(const std::filesystem::path& path, const std::string& content) {
    auto tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw error("cannot write '" + tmp.string() + "'");
        out << content;
        out.flush();
        if (!out) throw error("write failed for '" + tmp.string() + "'");
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        std::filesystem::remove(tmp);
        throw error("cannot rename '" + tmp.string() + "' to '" + path.string() + "': " + ec.message());
    }
}

inline void write_signal(const std::filesystem::path& path, const Signal& f, const std::vector<Column>& extra = {}) {
    std::ostringstream s;
    write_signal(s, f, extra);
    atomic_write(path, s.str());
}

}  // namespace hilbert::csv
