#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "bloch/cli.hpp"
#include "bloch/io.hpp"
#include "test_util.hpp"

using namespace bloch;
using testutil::data_path;

namespace {

struct Outcome {
  int code = 0;
  std::string out;
  std::string err;

  Json json() const { return Json::parse(out); }
};

Outcome run(std::vector<std::string> args) {
  std::ostringstream out;
  std::ostringstream err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::filesystem::path scratch(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / "bloch_cli_test";
  std::filesystem::create_directories(dir);
  return dir / name;
}

std::string write_file(const std::string& name, const std::string& text) {
  const auto path = scratch(name);
  std::ofstream(path) << text;
  return path.string();
}

}  // namespace

TEST_CASE("bounds") {
  SUBCASE("v2 optimum") {
    const auto r = run({"bounds", "v2", "--no-timestamp"});
    REQUIRE(r.code == 0);
    const Json j = r.json();
    CHECK(j["command"] == "bounds v2");
    CHECK(std::abs(j["results"]["value"].get<double>() - 0.0813782) < 1e-4);
    CHECK(j["provenance"]["tool"] == "bloch");
    CHECK_FALSE(j["provenance"].contains("timestamp"));
  }

  SUBCASE("v1 pointwise") {
    const auto r = run({"bounds", "v1", "--gamma", "2", "--sigma", "0.5"});
    REQUIRE(r.code == 0);
    CHECK(r.json()["results"]["value"].get<double>() == doctest::Approx(bloch_bound_v1(2.0, 0.5)));
    CHECK(r.json()["provenance"].contains("timestamp"));
  }

  SUBCASE("eh") {
    const auto r = run({"bounds", "eh", "--rho", "0.45", "--r", "0.8"});
    REQUIRE(r.code == 0);
    CHECK(std::abs(r.json()["results"]["value"].get<double>() - 0.347493) < 1e-3);
    CHECK(r.json()["results"]["radicand"] == "a3^2 r^4");
  }

  SUBCASE("wu") {
    const auto r = run({"bounds", "wu", "--m", "2", "--K", "1"});
    REQUIRE(r.code == 0);
    CHECK(r.json()["results"]["value"].get<double>() == doctest::Approx(theorem_bound_mv(2, 1.0).value));
    CHECK(r.json()["results"]["K_exponent"] == 2.5);
  }

  SUBCASE("wu branches") {
    const auto r = run({"bounds", "wu", "--gamma", "2", "--sigma", "0.5", "--det", "3"});
    REQUIRE(r.code == 0);
    CHECK(r.json()["results"]["branches"].contains("first"));
  }

  SUBCASE("grid csv") {
    const auto path = scratch("v1.csv");
    std::filesystem::remove(path);
    const auto r = run({"bounds", "v1", "--coarse", "11", "--grid-csv", path.string()});
    REQUIRE(r.code == 0);
    std::ifstream f(path);
    std::string line;
    long lines = 0;
    std::getline(f, line);
    CHECK(line == "gamma,sigma,value");
    while (std::getline(f, line)) ++lines;
    CHECK(lines == 121);
  }

  SUBCASE("usage errors") {
    CHECK(run({"bounds", "v3"}).code == 2);
    CHECK(run({"bounds", "v1", "--gamma", "2"}).code == 2);
    CHECK(run({"bounds", "v1", "--gamma", "0.5", "--sigma", "0.5"}).code == 2);
    CHECK(run({"bounds", "eh", "--rho", "0.9", "--r", "0.8"}).code == 2);
    CHECK(run({}).code == 2);
    CHECK(run({"bounds", "v1", "--gamma", "abc", "--sigma", "0.5"}).code == 2);
  }

  SUBCASE("output file") {
    const auto path = scratch("v2.json");
    const auto r = run({"--out", path.string(), "bounds", "v2", "--no-timestamp"});
    REQUIRE(r.code == 0);
    CHECK(r.out.empty());
    CHECK(std::abs(read_json_file(path.string())["results"]["value"].get<double>() - 0.0813782) < 1e-4);
  }
}

TEST_CASE("certify") {
  SUBCASE("recentered quartic with verification") {
    const auto r = run({"certify", data_path("quartic_a4_66922_plus.json"), "--b", "-0.07", "--rho",
                        "0.59", "--verify", "10000"});
    REQUIRE(r.code == 0);
    const Json j = r.json();
    CHECK(std::abs(j["results"]["certificate"]["schlicht_radius"].get<double>() - 0.43806) < 5e-4);
    CHECK(j["results"]["verification"]["ok"] == true);
    CHECK(j["results"]["verification"]["failures"] == 0);
  }

  SUBCASE("origin") {
    const auto r = run({"certify", data_path("quartic_a4_66922.json"), "--origin", "--rho", "0.534759"});
    REQUIRE(r.code == 0);
    CHECK(std::abs(r.json()["results"]["certificate"]["schlicht_radius"].get<double>() - 0.38832) < 1e-4);
  }

  SUBCASE("search") {
    const auto r = run({"certify", data_path("quartic_a4_2.json"), "--search"});
    REQUIRE(r.code == 0);
    CHECK(r.json()["results"]["certificate"]["schlicht_radius"].get<double>() >= 0.4468);
  }

  SUBCASE("identity") {
    const auto r = run({"certify", data_path("identity.json"), "--b", "0", "--rho", "0.9", "--verify", "100"});
    REQUIRE(r.code == 0);
    CHECK(r.json()["results"]["certificate"]["schlicht_radius"].get<double>() == doctest::Approx(0.9));
  }

  SUBCASE("malformed polynomial") {
    const auto path = write_file("bad.json", "{ \"coeffs\": [ [0, 0], ");
    CHECK(run({"certify", path}).code == 2);
    CHECK(run({"certify", data_path("missing.json")}).code == 2);
  }

  SUBCASE("degenerate center") {
    const auto path = write_file("square.json", R"({"coeffs": [[0, 0], [0, 0], [1, 0]]})");
    const auto r = run({"certify", path, "--b", "0"});
    CHECK(r.code == 3);
    CHECK(r.err.find("degenerate") != std::string::npos);
  }

  SUBCASE("non-normalized search") {
    const auto path = write_file("scaled.json", R"({"coeffs": [[0, 0], [2, 0]]})");
    CHECK(run({"certify", path, "--search"}).code == 2);
  }

  SUBCASE("failed verification") {
    // Escape from the domain disk shows up as verification failures.
    const auto r = run({"certify", data_path("quartic_a4_66922_plus.json"), "--b", "-0.07", "--rho",
                        "0.59", "--verify", "200", "--max-iter", "2"});
    CHECK(r.code == 4);
    CHECK(r.json()["results"]["verification"]["ok"] == false);
  }
}

TEST_CASE("wu") {
  SUBCASE("identity estimate") {
    const auto r = run({"wu", data_path("identity_map.json"), "estimate-k"});
    REQUIRE(r.code == 0);
    CHECK(r.json()["results"]["K"].get<double>() == doctest::Approx(1.0));
  }

  SUBCASE("stats") {
    const auto r = run({"wu", data_path("quadratic_map.json"), "stats", "--point", "[[0.1, 0], [0, 0.2]]"});
    REQUIRE(r.code == 0);
    CHECK(r.json()["results"]["small_eigen"]["holds"] == true);
  }

  SUBCASE("fixture certificate") {
    const auto r = run({"wu", data_path("quadratic_map.json"), "certify", "--verify", "1000"});
    REQUIRE(r.code == 0);
    const Json j = r.json();
    CHECK(j["results"]["certificate"]["schlicht_radius"].get<double>() == doctest::Approx(0.25));
    CHECK(j["results"]["verification"]["ok"] == true);
  }

  SUBCASE("singular map") {
    CHECK(run({"wu", data_path("singular_map.json"), "certify"}).code == 3);
  }

  SUBCASE("bad point") {
    CHECK(run({"wu", data_path("quadratic_map.json"), "stats", "--point", "[[0.1, 0]]"}).code == 2);
    CHECK(run({"wu", data_path("quadratic_map.json"), "stats", "--point", "[["}).code == 2);
  }
}

TEST_CASE("reports are reproducible without timestamps") {
  for (const std::vector<std::string>& args :
       {std::vector<std::string>{"bounds", "v1", "--no-timestamp"},
        std::vector<std::string>{"bounds", "eh", "--no-timestamp"},
        std::vector<std::string>{"certify", data_path("quartic_a4_66922_plus.json"), "--b", "-0.07",
                                 "--rho", "0.59", "--no-timestamp"}}) {
    const auto a = run(args);
    const auto b = run(args);
    REQUIRE(a.code == 0);
    CHECK(a.out == b.out);
    CHECK(run_report_from_json(a.json()) == run_report_from_json(b.json()));
  }
}
