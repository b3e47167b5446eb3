#include <catch2/catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <unistd.h>

#include "../tools/cli_app.hpp"
#include "hilbert/signals.hpp"

using namespace hilbert;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() / ("hilbert-cli-" + std::to_string(::getpid()));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    std::string operator/(const std::string& name) const { return (path / name).string(); }
};

struct Result {
    int code;
    std::string out;
    std::string err;
};

Result run(std::vector<std::string> args) {
    args.insert(args.begin(), "hilbert");
    std::vector<const char*> argv;
    for (auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

std::string slurp(const std::string& p) {
    std::ifstream in(p);
    std::stringstream s;
    s << in.rdbuf();
    return s.str();
}

}  // namespace

TEST_CASE("cli usage errors exit 2", "[cli]") {
    CHECK(run({}).code == 2);
    CHECK(run({"transform", "--method", "fourier", "--input", "x.csv"}).code == 2);
    CHECK(run({"czd", "--lambda", "-1", "--input", "x.csv"}).code == 2);
    CHECK(run({"transform", "--method", "pv", "--input", "/nonexistent.csv"}).code == 2);
    CHECK(run({"--version"}).code == 0);
    CHECK(run({"--version"}).out.find(cli::version) != std::string::npos);
    CHECK(run({"--help"}).code == 0);
}

TEST_CASE("cli rejects malformed csv with a position", "[cli]") {
    TempDir tmp;
    std::ofstream(tmp / "bad.csv") << "x,value\n0,1\n0.5,nan\n1,0\n";
    const auto r = run({"dist", "--input", tmp / "bad.csv"});
    CHECK(r.code == 2);
    CHECK(r.err.find("line 3, column 5") != std::string::npos);
    std::ofstream(tmp / "uneven.csv") << "x,value\n0,1\n0.5,1\n1.1,0\n";
    CHECK(run({"dist", "--input", tmp / "uneven.csv"}).code == 2);
}

TEST_CASE("cli transform", "[cli]") {
    TempDir tmp;
    const Grid g(-2.0, 1.0 / 64, 256);
    csv::write_signal(tmp / "zero.csv", Signal(g));
    csv::write_signal(tmp / "gauss.csv", signals::gaussian(g, 0.0, 0.5));

    auto r = run({"transform", "--method", "spectral", "--input", tmp / "zero.csv", "--output", tmp / "out.csv"});
    REQUIRE(r.code == 0);
    CHECK(csv::read_signal(tmp / "out.csv", "h_value").is_zero());

    r = run({"transform", "--method", "pv", "--input", tmp / "gauss.csv", "--output", tmp / "pv.csv"});
    REQUIRE(r.code == 0);
    const auto text = slurp(tmp / "pv.csv");
    CHECK(text.rfind("x,value,h_value,converged,est_error\n", 0) == 0);
    CHECK(csv::read_signal(tmp / "pv.csv", "est_error").size() == g.size());

    r = run({"transform", "--method", "pv", "--input", tmp / "gauss.csv", "--epsilon-start", "0.5", "--epsilon-steps", "3"});
    CHECK(r.code == 0);
    r = run({"transform", "--method", "pv", "--input", tmp / "gauss.csv", "--epsilon-start", "0.01", "--epsilon-steps", "3"});
    CHECK(r.code == 2);

    r = run({"transform", "--method", "closed-form", "--kind", "indicator", "--a", "0", "--b", "1", "--input",
             tmp / "zero.csv"});
    REQUIRE(r.code == 0);
    CHECK(r.out.find(",nan,1\n") != std::string::npos);
}

TEST_CASE("cli czd on the indicator", "[cli]") {
    TempDir tmp;
    const Grid g(-1.0, 1.0 / 1024, 3 * 1024);
    csv::write_signal(tmp / "indicator.csv", signals::indicator(g, 0.0, 1.0));
    auto r = run({"czd", "--lambda", "0.6", "--input", tmp / "indicator.csv"});
    REQUIRE(r.code == 0);
    const auto j = nlohmann::json::parse(r.out);
    REQUIRE(j.size() == 1);
    CHECK(j[0]["left"].get<double>() == 0.0);
    CHECK(j[0]["length"].get<double>() == 1.0);

    r = run({"czd", "--lambda", "0.6", "--input", tmp / "indicator.csv", "--emit", tmp / "good.csv", tmp / "bad_k.csv",
             tmp / "intervals.json"});
    REQUIRE(r.code == 0);
    CHECK(fs::exists(tmp / "good.csv"));
    CHECK(fs::exists(tmp / "bad_0.csv"));
    CHECK(nlohmann::json::parse(slurp(tmp / "intervals.json")) == j);

    std::ofstream(tmp / "neg.csv") << "x,value\n0,1\n1,-1\n2,0\n";
    CHECK(run({"czd", "--lambda", "1", "--input", tmp / "neg.csv"}).code == 2);
}

TEST_CASE("cli bad part naming", "[cli]") {
    CHECK(cli::detail::bad_path("out/bad_k.csv", 3) == "out/bad_3.csv");
    CHECK(cli::detail::bad_path("b{k}.csv", 12) == "b12.csv");
    CHECK(cli::detail::bad_path("bad.csv", 0) == "bad_0.csv");
}

TEST_CASE("cli verify and determinism", "[cli]") {
    TempDir tmp;
    const Grid g(-8.0, 16.0 / 1024, 1024);
    csv::write_signal(tmp / "gauss.csv", signals::gaussian(g));
    auto r = run({"verify", "--input", tmp / "gauss.csv", "--checks", "all", "--json", tmp / "a.json"});
    CHECK(r.code == 0);
    r = run({"verify", "--input", tmp / "gauss.csv", "--checks", "all", "--json", tmp / "b.json"});
    CHECK(r.code == 0);
    CHECK(slurp(tmp / "a.json") == slurp(tmp / "b.json"));
    const auto j = nlohmann::json::parse(slurp(tmp / "a.json"));
    CHECK(j.is_array());
    CHECK(j[0].contains("context"));

    r = run({"verify", "--input", tmp / "gauss.csv", "--checks", "isometry,skew_adjoint"});
    CHECK(r.code == 0);
    CHECK(nlohmann::json::parse(r.out).size() == 4);
    CHECK(run({"verify", "--input", tmp / "gauss.csv", "--checks", "bogus"}).code == 2);
}

TEST_CASE("cli dist", "[cli]") {
    TempDir tmp;
    const Grid g(-1.0, 1.0 / 1000, 3001);
    csv::write_signal(tmp / "ind.csv", Signal::sample(g, [](double x) { return x >= 0 && x < 1 ? 1.0 : 0.0; }));
    auto r = run({"dist", "--input", tmp / "ind.csv", "--thresholds", "0.5,2"});
    REQUIRE(r.code == 0);
    std::istringstream in(r.out);
    std::string header, a, b;
    std::getline(in, header);
    std::getline(in, a);
    std::getline(in, b);
    CHECK(header == "alpha,measure");
    CHECK(a.rfind("0.5,", 0) == 0);
    CHECK(b == "2,0");
    CHECK(run({"dist", "--input", tmp / "ind.csv", "--thresholds", "2,0.5"}).code == 2);
    r = run({"dist", "--input", tmp / "ind.csv", "--levels", "4", "--output", tmp / "d.csv"});
    CHECK(r.code == 0);
    CHECK(slurp(tmp / "d.csv").find("alpha,measure\n0.25,") == 0);
}
