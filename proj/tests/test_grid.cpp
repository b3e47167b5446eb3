#include <catch2/catch_amalgamated.hpp>

#include <sstream>

#include "hilbert/csv.hpp"
#include "hilbert/grid.hpp"
#include "hilbert/signals.hpp"

using namespace hilbert;
using Catch::Approx;

TEST_CASE("grid validation", "[grid]") {
    CHECK_THROWS_AS(Grid(0.0, 0.0, 10), domain_error);
    CHECK_THROWS_AS(Grid(0.0, -1.0, 10), domain_error);
    CHECK_THROWS_AS(Grid(0.0, 1.0, 1), domain_error);
    const Grid g(1.0, 0.5, 4);
    CHECK(g.x(3) == 2.5);
    CHECK(g.end() == 3.0);
    CHECK(compatible(g, Grid(1.0, 0.5, 4)));
    CHECK_FALSE(compatible(g, Grid(1.0, 0.5, 5)));
}

TEST_CASE("signals reject non-finite values and mismatched grids", "[grid]") {
    const Grid g(0.0, 1.0, 3);
    CHECK_THROWS_AS(Signal(g, {1.0, std::nan(""), 0.0}), domain_error);
    CHECK_THROWS_AS(Signal(g, {1.0, 2.0}), consistency_error);
    CHECK_THROWS_AS(Signal(g) + Signal(Grid(0.0, 1.0, 4)), consistency_error);
}

TEST_CASE("lp_norm examples", "[grid]") {
    const double h = 1.0 / 1000;
    CHECK(lp_norm(Signal(Grid(0.0, h, 100)), 2.0) == 0.0);

    const Grid g(-1.0, h, 3001);
    CHECK(lp_norm(signals::indicator(g, 0.0, 1.0), 1.0) == Approx(1.0).margin(h));

    const Grid t(-2.0, h, 4001);
    CHECK(lp_norm(signals::tent(t), 1.0) == Approx(1.0).margin(10 * h));
    CHECK_THROWS_AS(lp_norm(signals::tent(t), 0.5), domain_error);
    CHECK(lp_norm(signals::tent(t), infinity) == 1.0);
}

TEST_CASE("lp_norm homogeneity", "[grid]") {
    const Grid g(-3.0, 0.01, 601);
    const auto f = signals::modulated_gaussian(g, 0.2, 0.7, 5.0);
    for (double p : {1.0, 1.5, 2.0, 3.0, 7.0})
        for (double c : {-3.0, 1e-5, 2.5e7}) CHECK(lp_norm(c * f, p) == Approx(std::abs(c) * lp_norm(f, p)).epsilon(1e-12));
}

TEST_CASE("distribution function examples", "[grid]") {
    const double h = 1.0 / 1000;
    const Grid g(-1.0, h, 3001);
    const auto chi = signals::indicator(g, 0.0, 1.0);
    CHECK(distribution_at(chi, 0.5) == Approx(1.0).margin(h));
    CHECK(distribution_at(chi, 1.5) == 0.0);

    const Grid t(-2.0, h, 4001);
    CHECK(distribution_at(signals::tent(t), 0.25) == Approx(1.5).margin(2 * h));

    const double bad[] = {0.5, 0.5};
    CHECK_THROWS_AS(distribution_function(chi, bad), domain_error);
    const double neg[] = {-1.0};
    CHECK_THROWS_AS(distribution_function(chi, neg), domain_error);
}

TEST_CASE("distribution curve is nonincreasing and bounded by the support", "[grid]") {
    const Grid g(-3.0, 0.01, 601);
    const auto f = signals::modulated_gaussian(g, 0.0, 1.0, 4.0);
    std::vector<double> a;
    for (int i = 1; i <= 200; ++i) a.push_back(i * 0.005);
    const auto c = distribution_function(f, a);
    for (std::size_t i = 1; i < c.measures.size(); ++i) CHECK(c.measures[i] <= c.measures[i - 1]);
    CHECK(c.measures.front() <= g.length());
}

TEST_CASE("layer cake examples", "[grid]") {
    const double h = 1.0 / 1000;
    const Grid g(-1.0, h, 3001);
    CHECK(layer_cake_norm(signals::indicator(g, 0.0, 1.0), 2.0, 4096) == Approx(1.0).margin(1e-3));
    const Grid t(-2.0, h, 4001);
    CHECK(layer_cake_norm(signals::tent(t), 1.0, 4096) == Approx(1.0).margin(1e-3));
    CHECK(layer_cake_norm(Signal(t), 2.0, 4096) == 0.0);
    CHECK_THROWS_AS(layer_cake_norm(signals::tent(t), 2.0, 1), domain_error);
}

TEST_CASE("chebyshev examples", "[grid]") {
    const double h = 1.0 / 1024;
    const Grid g(-1.0, h, 3072);
    const auto chi = signals::indicator(g, 0.0, 1.0);
    auto r = chebyshev_bound_check(chi, 0.5);
    CHECK(r.pass);
    CHECK(r.lhs == 1.0);
    CHECK(r.rhs == 2.0);
    r = chebyshev_bound_check(chi, 1.0);
    CHECK(r.pass);
    CHECK(r.lhs == r.rhs);
    r = chebyshev_bound_check(Signal(g), 3.0);
    CHECK(r.pass);
    CHECK(r.lhs == 0.0);
    CHECK_THROWS_AS(chebyshev_bound_check(chi, 0.0), domain_error);
}

TEST_CASE("embed places a signal on a cell-aligned grid", "[grid]") {
    const Grid small(1.0, 0.25, 4);
    const Grid big(0.0, 0.25, 12);
    const auto e = embed(Signal(small, {1, 2, 3, 4}), big);
    CHECK(e[4] == 1.0);
    CHECK(e[7] == 4.0);
    CHECK(integral(e) == 2.5);
    CHECK_THROWS_AS(embed(Signal(Grid(1.1, 0.25, 4), {1, 2, 3, 4}), big), consistency_error);
}

TEST_CASE("csv round trip is exact", "[csv]") {
    const Grid g(-0.3, 1.0 / 3.0, 50);
    const auto f = signals::modulated_gaussian(g, 1.0, 2.0, 3.0);
    std::stringstream s;
    csv::write_signal(s, f);
    const auto back = csv::read_signal(s);
    CHECK(back == f);
}

TEST_CASE("csv diagnostics carry line and column", "[csv]") {
    auto fails_at = [](const std::string& text, std::size_t line, std::size_t col) {
        std::stringstream s(text);
        try {
            (void)csv::read_signal(s);
        } catch (const parse_error& e) {
            CHECK(e.line() == line);
            CHECK(e.column() == col);
            return;
        }
        FAIL("no parse error for: " << text);
    };
    fails_at("x,value\n0,1\n1,nan\n2,3\n", 3, 3);
    fails_at("x,value\n0,1\n1,abc\n", 3, 3);
    fails_at("x,value\n0,1\n1,2\n2.5,3\n", 4, 1);
    fails_at("x,value\n0,1\n0,2\n", 3, 1);
    fails_at("t,value\n0,1\n", 1, 1);
    fails_at("x,value\n0,1\n1\n", 3, 1);
}

TEST_CASE("csv reads a named column", "[csv]") {
    std::stringstream s("x,value,h_value\n0,1,5\n0.5,2,6\n1,3,7\n");
    const auto f = csv::read_signal(s, "h_value");
    CHECK(f[2] == 7.0);
    CHECK(f.grid().spacing() == 0.5);
}
