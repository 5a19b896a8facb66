#include <doctest.h>

#include <unistd.h>

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <sstream>
#include <string>
#include <vector>

#include "ghom/cli.hpp"
#include "ghom/config.hpp"
#include "ghom/errors.hpp"

using namespace ghom;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() / ("ghom_cli_test_" + std::to_string(::getpid()));
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    std::string sub(const std::string& name) const { return (path / name).string(); }
};

int run_cli(std::initializer_list<std::string> args) {
    std::vector<std::string> owned{"ghom"};
    owned.insert(owned.end(), args.begin(), args.end());
    std::vector<const char*> argv;
    for (const auto& a : owned) argv.push_back(a.c_str());
    return cli_main(static_cast<int>(argv.size()), argv.data());
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

}  // namespace

TEST_CASE("config: canonicalization and round trip") {
    RunConfig cfg;
    cfg.load_text("# comment\n\nfield.kind = shear\nfield.amplitude = 2.50\n"
                  "effective.P=1,0 ; 0 , 1\n",
                  "inline");
    cfg.resolve();

    CHECK(cfg.get_string("field.kind") == "shear");
    CHECK(cfg.get_double("field.amplitude") == 2.5);
    CHECK(cfg.raw("effective.P") == "1,0;0,1");
    CHECK(cfg.get_vec_list("effective.P").size() == 2);
    CHECK(cfg.get_double("assumptions.chi") == doctest::Approx(0.3535533905932738));

    // serialize -> reparse -> serialize is a fixed point
    const std::string manifest = cfg.serialize("effective");
    RunConfig again;
    again.load_text(manifest, "manifest");
    again.resolve();
    CHECK(again.serialize("effective") == manifest);
}

TEST_CASE("config: strictness") {
    RunConfig unknown;
    unknown.load_text("field.knid=shear\n", "inline");
    CHECK_THROWS_AS(unknown.resolve(), ConfigError);

    RunConfig dup;
    CHECK_THROWS_AS(dup.load_text("solver.T=1\nsolver.T=2\n", "inline"), ConfigError);

    RunConfig bad_line;
    CHECK_THROWS_AS(bad_line.load_text("just words\n", "inline"), ConfigError);

    RunConfig bad_value;
    bad_value.set("grid.dimension", "5");
    CHECK_THROWS_AS(bad_value.resolve(), ConfigError);

    RunConfig bad_vec;
    bad_vec.set("metric.tilt", "1,2,3");
    CHECK_THROWS_AS(bad_vec.resolve(), ConfigError);

    RunConfig axis;
    axis.set("field.kind", "shear");
    axis.set("field.axis", "2");
    CHECK_THROWS_AS(axis.resolve(), ConfigError);

    // overrides layer, later wins
    RunConfig layered;
    layered.load_text("solver.T=1\n", "file");
    layered.set("solver.T", "2");
    layered.resolve();
    CHECK(layered.get_double("solver.T") == 2.0);
}

TEST_CASE("config: infinity literals and field construction") {
    RunConfig cfg;
    cfg.set("solver.cap", "inf");
    cfg.set("field.kind", "trig_poly");
    cfg.set("field.terms", "0:sin:1,0:6.5;1:cos:0,2:-1");
    cfg.resolve();
    CHECK(cfg.get_double("solver.cap") == kInf);
    CHECK(cfg.raw("solver.cap") == "inf");

    const VectorFieldSpec field = cfg.make_field();
    CHECK(field.kind() == VectorFieldSpec::Kind::TrigPoly);
    Vec x{};
    x[0] = 0.25;
    x[1] = 0.1;
    const Vec v = field.eval(x);
    CHECK(v[0] == doctest::Approx(6.5));  // sin(2*pi*0.25) = 1

    RunConfig missing;
    missing.set("field.kind", "trig_poly");
    missing.resolve();
    CHECK_THROWS_AS(missing.make_field(), ConfigError);
}

TEST_CASE("cli: exit codes") {
    TempDir tmp;
    CHECK(run_cli({"no-such-command"}) == 2);
    CHECK(run_cli({"effective", "--set", "bogus.key=1", "--out", tmp.sub("a")}) == 2);
    CHECK(run_cli({"effective", "--set"}) == 2);
    CHECK(run_cli({"check-assumptions", "--strict", "--set", "field.kind=sink",
                   "--set", "field.amplitude=2", "--set", "grid.resolution=32",
                   "--out", tmp.sub("b")}) == 4);
    // same failing check without --strict reports and succeeds
    CHECK(run_cli({"check-assumptions", "--set", "field.kind=sink",
                   "--set", "field.amplitude=2", "--set", "grid.resolution=32",
                   "--out", tmp.sub("c")}) == 0);
    const std::string report = slurp(tmp.sub("c") + "/check-assumptions.json");
    CHECK(report.find("\"passes_A2\": false") != std::string::npos);
    CHECK(report.find("\"schema_version\": 1") != std::string::npos);
    // negative cycle during distances -> numerical failure
    CHECK(run_cli({"distance", "--set", "field.kind=shear", "--set", "field.amplitude=2",
                   "--set", "grid.resolution=12", "--set", "metric.truncation=2",
                   "--set", "metric.tilt=1,0", "--out", tmp.sub("d")}) == 3);
}

TEST_CASE("cli: effective on a still field writes the exact row") {
    TempDir tmp;
    REQUIRE(run_cli({"effective", "--set", "grid.resolution=16", "--out", tmp.sub("e")}) == 0);
    const std::string csv = slurp(tmp.sub("e") + "/effective.csv");
    CHECK(csv.find("p0,p1,lower,upper,limit,k_last,stabilized,route_gap") == 0);
    CHECK(csv.find("\n1,0,1,1,1,") != std::string::npos);
}

TEST_CASE("cli: manifest reruns reproduce outputs byte for byte") {
    TempDir tmp;
    const std::string dir = tmp.sub("h");
    REQUIRE(run_cli({"homogenize", "--set", "grid.resolution=16", "--set",
                     "field.kind=constant", "--set", "field.value=0.5,0", "--set",
                     "effective.directions=8", "--set", "solver.resolution=32", "--set",
                     "solver.epsilon=0.5,0.25", "--set", "solver.T=0.25", "--out", dir}) == 0);
    const std::string first = slurp(dir + "/homogenize.csv");
    const std::string manifest = slurp(dir + "/manifest.txt");

    // a constant field cannot depend on epsilon: both rows carry ratio 1
    CHECK(first.find("epsilon,time,error,ratio") == 0);
    CHECK(first.find(",1\n") != std::string::npos);

    REQUIRE(run_cli({"homogenize", "--config", dir + "/manifest.txt"}) == 0);
    CHECK(slurp(dir + "/homogenize.csv") == first);
    CHECK(slurp(dir + "/manifest.txt") == manifest);
}

TEST_CASE("cli: json table format") {
    TempDir tmp;
    const std::string dir = tmp.sub("j");
    REQUIRE(run_cli({"wulff", "--set", "grid.resolution=16", "--set",
                     "effective.directions=8", "--set", "output.format=json", "--out",
                     dir}) == 0);
    const std::string json = slurp(dir + "/wulff.json");
    CHECK(json.find("\"schema_version\": 1") != std::string::npos);
    CHECK(json.find("\"columns\": [\"u0\", \"u1\", \"value\"]") != std::string::npos);
    CHECK(!fs::exists(dir + "/wulff.csv"));
}

TEST_CASE("cli: evolve writes the requested snapshot rows") {
    TempDir tmp;
    const std::string dir = tmp.sub("v");
    REQUIRE(run_cli({"evolve", "--set", "solver.resolution=16", "--set", "solver.T=0.1",
                     "--set", "solver.times=0.05,0.1", "--set", "solver.epsilon=0.5",
                     "--out", dir}) == 0);
    const std::string csv = slurp(dir + "/evolve.csv");
    CHECK(csv.find("time,i0,i1,value") == 0);
    // header + 2 times x 16^2 cells
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 1 + 2 * 256);
}
