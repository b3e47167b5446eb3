#include <catch2/catch_amalgamated.hpp>

#include "hilbert/czd.hpp"
#include "hilbert/signals.hpp"
#include "support/oracles.hpp"

using namespace hilbert;
using Catch::Approx;

namespace {

const double h = 1.0 / 1024;

void require_all_pass(const std::vector<BoundReport>& rs) {
    for (const auto& r : rs) {
        INFO(r.name << " lhs=" << r.lhs << " rhs=" << r.rhs);
        CHECK(r.pass);
    }
}

}  // namespace

TEST_CASE("indicator at lambda 0.6", "[czd]") {
    const Grid g(0.0, h, 1024);
    const Signal chi(g, std::vector<double>(1024, 1.0));
    const auto d = cz_decompose(chi, 0.6);
    CHECK(d.initial_mesh_length == 2.0);
    REQUIRE(d.selected.size() == 1);
    CHECK(d.selected[0].left == 0.0);
    CHECK(d.selected[0].length == 1.0);
    CHECK(d.selected[0].generation == 1);
    CHECK(d.selected[0].average == 1.0);
    CHECK(d.omega_length == 1.0);
    CHECK(d.omega_length <= 1.0 / 0.6);
    REQUIRE(d.bad_parts.size() == 1);
    CHECK(d.bad_parts[0].is_zero());
    for (std::size_t j = 0; j < 1024; ++j) CHECK(d.good[j] == 1.0);
    require_all_pass(verify_decomposition(chi, d));
}

TEST_CASE("indicator at lambda 2 selects nothing", "[czd]") {
    const Grid g(-1.0, h, 3 * 1024);
    const auto chi = signals::indicator(g, 0.0, 1.0);
    const auto d = cz_decompose(chi, 2.0);
    CHECK(d.selected.empty());
    CHECK(d.omega_length == 0.0);
    CHECK(d.bad_parts.empty());
    for (std::size_t j = 0; j < g.size(); ++j) CHECK(d.good[j] == chi[j]);
}

TEST_CASE("constant at half the height selects nothing", "[czd]") {
    const Grid g(0.0, h, 700);
    const Signal f(g, std::vector<double>(700, 0.3));
    const auto d = cz_decompose(f, 0.6);
    CHECK(d.selected.empty());
    CHECK(d.good == embed(f, d.working_grid));
}

TEST_CASE("two on the left half of the unit interval", "[czd]") {
    const Grid g(0.0, h, 1024);
    const auto f = Signal::sample(g, [](double x) { return x < 0.5 ? 2.0 : 0.0; });
    const auto d = cz_decompose(f, 0.6);
    CHECK(d.initial_mesh_length == 2.0);
    REQUIRE(d.selected.size() == 1);
    CHECK(d.selected[0].left == 0.0);
    CHECK(d.selected[0].length == 1.0);
    for (std::size_t j = 0; j < 1024; ++j) {
        CHECK(d.good[j] == 1.0);
        CHECK(d.bad_parts[0][j] == (j < 512 ? 1.0 : -1.0));
    }
    CHECK(integral(d.bad_parts[0]) == 0.0);
    require_all_pass(verify_decomposition(f, d));
}

TEST_CASE("zero signal decomposes to nothing", "[czd]") {
    const Grid g(0.0, h, 64);
    const auto d = cz_decompose(Signal(g), 1.0);
    CHECK(d.selected.empty());
    CHECK(d.good.is_zero());
}

TEST_CASE("invalid inputs", "[czd]") {
    const Grid g(0.0, h, 64);
    CHECK_THROWS_AS(cz_decompose(Signal(g), 0.0), domain_error);
    CHECK_THROWS_AS(cz_decompose(Signal(g), -1.0), domain_error);
    std::vector<double> v(64, 1.0);
    v[10] = -1e-3;
    CHECK_THROWS_AS(cz_decompose(Signal(g, v), 1.0), domain_error);
}

TEST_CASE("good_bad_split rejects a foreign decomposition", "[czd]") {
    const Grid g(0.0, h, 1024);
    const Signal chi(g, std::vector<double>(1024, 1.0));
    const auto d = cz_decompose(chi, 0.6);
    CHECK_THROWS_AS(good_bad_split(Signal(Grid(0.0, h, 512)), d), consistency_error);
    CHECK_THROWS_AS(good_bad_split(0.5 * chi, d), consistency_error);
    const auto [g2, bad] = good_bad_split(chi, d);
    CHECK(g2 == d.good);
    CHECK(bad.size() == 1);
}

TEST_CASE("single-cell spikes are selected at the floor", "[czd]") {
    std::vector<double> v(256, 0.0);
    v[100] = 50.0;
    const Signal f(Grid(0.0, 1.0, 256), v);
    const auto d = cz_decompose(f, 10.0);
    // Mesh of 8 cells anchored at the spike (average 6.25); its left half averages 12.5.
    REQUIRE(d.selected.size() == 1);
    CHECK(d.selected[0].average == 12.5);
    CHECK(d.selected[0].length == 4.0);
    require_all_pass(verify_decomposition(f, d));
}

TEST_CASE("shared mesh gives nested exceptional sets", "[czd]") {
    const Grid g(0.0, 1.0 / 64, 200);
    const auto f = Signal::sample(g, [](double x) { return 1.0 + std::sin(7 * x) + (x > 1.3 && x < 1.5 ? 3.0 : 0.0); });
    const auto d1 = cz_decompose(f, 0.8);
    const auto d2 = cz_decompose(f, 2.0, {d1.mesh_exponent});
    CHECK(d2.initial_mesh_length == d1.initial_mesh_length);
    CHECK(d2.omega_length <= d1.omega_length);
    for (const auto& J : d2.selected) {
        bool inside = false;
        for (const auto& I : d1.selected)
            if (J.first_cell >= I.first_cell && J.first_cell + J.cell_count <= I.first_cell + I.cell_count) inside = true;
        CHECK(inside);
    }
    CHECK_THROWS_AS(cz_decompose(f, 0.8, {2u}), config_error);
}

TEST_CASE("bad tail of the dipole", "[czd][B2]") {
    const Grid g(0.0, h, 1024);
    const auto b = Signal::sample(g, [](double x) { return x < 0.5 ? 1.0 : -1.0; });
    const DyadicInterval I{0.0, 1.0, 0, 0.0, 0, 1024};
    const auto r = bad_tail_bound_check(b, I);
    CHECK(r.pass);
    CHECK(r.lhs == Approx(oracle::dipole_tail).epsilon(1e-8));
    CHECK(r.rhs == Approx(oracle::two_over_pi).epsilon(1e-14));
}

TEST_CASE("bad tail of zero and of a triangle wave", "[czd][B2]") {
    const Grid g(-1.0, 1.0 / 256, 512);
    const DyadicInterval I{-1.0, 2.0, 0, 0.0, 0, 512};
    CHECK(bad_tail_bound_check(Signal(g), I).lhs == 0.0);
    CHECK(bad_tail_bound_check(Signal(g), I).pass);
    // Two periods of a zero-mean triangle wave, sampled at cell midpoints so the mean vanishes.
    const auto tri = Signal::sample(g, [](double x) {
        const double u = std::fmod(x + 0.5 / 256 + 1.0, 1.0);
        return 1.0 - 4.0 * std::abs(u - 0.5);
    });
    REQUIRE(std::abs(integral(tri)) <= 1e-9 * lp_norm(tri, 1.0));
    CHECK(bad_tail_bound_check(tri, I).pass);
}

TEST_CASE("bad tail preconditions", "[czd][B2]") {
    const Grid g(0.0, 0.25, 4);
    const DyadicInterval I{0.0, 1.0, 0, 0.0, 0, 4};
    CHECK_THROWS_AS(bad_tail_bound_check(Signal(g, {1, 0, 0, 0}), I), precondition_error);
    const DyadicInterval half{0.0, 0.5, 0, 0.0, 0, 2};
    CHECK_THROWS_AS(bad_tail_bound_check(Signal(g, {1, 0, -1, 0}), half), precondition_error);
}

TEST_CASE("good part energy bound", "[czd][B1]") {
    const Grid g(0.0, 1.0 / 32, 128);
    const auto f = Signal::sample(g, [](double x) { return x < 1.0 ? 3.0 : 0.5; });
    const auto d = cz_decompose(f, 1.0);
    CHECK(good_energy_check(d.good).pass);
}

TEST_CASE("weak pipeline on the indicator", "[czd][weak]") {
    const Grid g(-1.0, h, 3 * 1024 + 1);
    const auto chi = signals::indicator_midpoint(g, 0.0, 1.0);
    for (double lambda : {0.25, 0.5, 1.0}) {
        const auto rep = weak_bound_pipeline(chi, lambda, spectral_handle());
        INFO("lambda " << lambda);
        CHECK(rep.summary.pass);
        CHECK(rep.summary.lhs <= 2.0);
        require_all_pass(rep.terms);
    }
}

TEST_CASE("weak pipeline on zero", "[czd][weak]") {
    const auto rep = weak_bound_pipeline(Signal(Grid(0.0, h, 64)), 1.0, spectral_handle());
    CHECK(rep.summary.pass);
    CHECK(rep.summary.lhs == 0.0);
    require_all_pass(rep.terms);
}

TEST_CASE("union length of overlapping spans", "[czd]") {
    CHECK(union_length({{0, 1}, {0.5, 2}, {3, 4}}) == 3.0);
    CHECK(union_length({}) == 0.0);
}
