#include <doctest.h>

#include <filesystem>
#include <cmath>
#include <fstream>
#include <sstream>

#include "galerkin/cli.hpp"
#include "galerkin/errors.hpp"

using namespace galerkin;
namespace fs = std::filesystem;

namespace {
fs::path scratch(const std::string& name) {
  auto dir = fs::temp_directory_path() / ("galerkin_test_cli_" + name);
  fs::remove_all(dir);
  return dir;
}

std::vector<std::string> lines_of(const fs::path& p) {
  std::ifstream is(p);
  std::vector<std::string> out;
  for (std::string line; std::getline(is, line);) out.push_back(line);
  return out;
}

nlohmann::json read_json(const fs::path& p) {
  std::ifstream is(p);
  return nlohmann::json::parse(is);
}
}  // namespace

TEST_CASE("level lists") {
  CHECK(cli::parse_levels("2,4,8,16") == std::vector<int>{2, 4, 8, 16});
  CHECK(cli::parse_levels("3") == std::vector<int>{3});
  CHECK_THROWS_AS(cli::parse_levels("4,2"), LevelError);
  CHECK_THROWS_AS(cli::parse_levels("2,2"), LevelError);
  CHECK_THROWS_AS(cli::parse_levels("0,1"), LevelError);
  CHECK_THROWS_AS(cli::parse_levels("2,x"), LevelError);
  CHECK_THROWS_AS(cli::parse_levels("2,4a"), LevelError);
  CHECK_THROWS_AS(cli::parse_levels(""), LevelError);
}

TEST_CASE("check bundles are deterministic and pass on the built-ins") {
  for (const auto& name : builtin_names()) {
    const auto rc = builtin_config(name);
    const auto a = cli::check_bundle(rc, 42);
    CHECK_MESSAGE(a["passed"].get<bool>(), name);
    CHECK(a.dump() == cli::check_bundle(rc, 42).dump());
    CHECK(a["config_digest"] == config_digest(rc));
  }
  const auto rc = builtin_config("heat");
  CHECK(cli::check_bundle(rc, 1).dump() != cli::check_bundle(rc, 2).dump());
}

TEST_CASE("inadmissible growth fails the check but not the parse") {
  auto rc = builtin_config("scalar");
  rc.problem.op.g->r = Rational(7);  // r0 = 6 for d = 2, p = 3
  std::ostringstream log;
  const auto path = scratch("inadmissible");
  fs::create_directories(path);
  CHECK(cli::cmd_check(rc, 42, (path / "check.json").string(), log) == cli::Exit::failed);
  const auto bundle = read_json(path / "check.json");
  CHECK_FALSE(bundle["passed"].get<bool>());
  bool found = false;
  for (const auto& r : bundle["checks"])
    if (r["name"] == "g2-admissibility") {
      found = true;
      CHECK_FALSE(r["passed"].get<bool>());
    }
  CHECK(found);
  CHECK(log.str().find("FAIL g2-admissibility") != std::string::npos);
}

TEST_CASE("solve writes trajectory, audit and manifest") {
  const auto dir = scratch("solve");
  std::ostringstream log;
  const auto rc = builtin_config("heat");
  REQUIRE(cli::cmd_solve(rc, 4, dir.string(), log) == cli::Exit::ok);
  const auto csv = lines_of(dir / "trajectory.csv");
  REQUIRE(csv.size() == 12);  // header + steps 0..10
  CHECK(csv[0] == "step,t,norm_H,c_1,c_2,c_3,c_4");
  CHECK(csv[1].rfind("0,0,1,1,0,0,0", 0) == 0);
  const auto audit = read_json(dir / "audit.json");
  CHECK(audit["passed"].get<bool>());
  CHECK(audit["steps"] == 10);
  CHECK(audit["checks"].size() == 4);
  // heat equation on the first mode: (1 + tau pi^2)^{-10}
  const double pi2 = M_PI * M_PI;
  CHECK(audit["final_norm_H"].get<double>() == doctest::Approx(std::pow(1 + 0.01 * pi2, -10)).epsilon(1e-9));
  const auto manifest = read_json(dir / "manifest.json");
  CHECK(manifest["config_digest"] == config_digest(rc));
  CHECK(manifest["artifacts"].size() == 3);
  CHECK(manifest.contains("timings_s"));
}

TEST_CASE("zero steps give a single-row trajectory") {
  const auto dir = scratch("zero");
  std::ostringstream log;
  auto rc = builtin_config("heat");
  rc.problem.nsteps = 0;
  REQUIRE(cli::cmd_solve(rc, 3, dir.string(), log) == cli::Exit::ok);
  CHECK(lines_of(dir / "trajectory.csv").size() == 2);
  CHECK(read_json(dir / "audit.json")["steps"] == 0);
}

TEST_CASE("converge writes one row per level") {
  const auto dir = scratch("converge");
  fs::create_directories(dir);
  std::ostringstream log;
  auto rc = builtin_config("heat");
  rc.problem.u0.kind = InitialSpec::Kind::parabola;
  REQUIRE(cli::cmd_converge(rc, {2, 4, 8}, (dir / "study.csv").string(), log) == cli::Exit::ok);
  const auto rows = lines_of(dir / "study.csv");
  REQUIRE(rows.size() == 4);
  CHECK(rows[0].rfind("n,e_V,e_H,h,", 0) == 0);
  CHECK(rows[3].rfind("8,0,0,", 0) == 0);
}

TEST_CASE("exponent subcommand") {
  std::ostringstream out, log;
  CHECK(cli::cmd_exponents(3, "11/5", out, log) == cli::Exit::ok);
  const auto j = nlohmann::json::parse(out.str());
  CHECK(j["p_prime"] == "11/6");
  CHECK(j["r0"] == "11/3");
  std::ostringstream out2;
  CHECK(cli::cmd_exponents(2, "1", out2, log) == cli::Exit::usage);
  CHECK(cli::cmd_exponents(2, "abc", out2, log) == cli::Exit::usage);
}
