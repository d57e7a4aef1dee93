#include <doctest.h>

#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "galerkin/config.hpp"

using namespace galerkin;

namespace {
const char* kMinimal = R"({
  "space": {"kind": "dirichlet-sine", "d": 1},
  "operator": {"p": 2},
  "u0": {"kind": "mode", "mode": 1},
  "time": {"T": 0.1, "nsteps": 10}
})";

template <class E>
std::string pointer_of(const std::string& text) {
  try {
    parse_config_text(text);
  } catch (const E& e) {
    return e.pointer();
  }
  return "<no error>";
}

std::string with(const std::string& from, const std::string& to) {
  std::string s = kMinimal;
  const auto pos = s.find(from);
  REQUIRE(pos != std::string::npos);
  return s.replace(pos, from.size(), to);
}
}  // namespace

TEST_CASE("minimal heat config") {
  const auto rc = parse_config_text(kMinimal);
  CHECK(rc.problem.space.kind == SpaceKind::dirichlet_sine);
  CHECK(rc.problem.op.p == 2);
  CHECK(rc.problem.u0.mode == 1);
  CHECK(rc.problem.T == 0.1);
  CHECK(rc.problem.nsteps == 10);
  CHECK(rc.warnings.empty());
  CHECK(rc.check_times() == std::vector<double>{0.0, 0.05, 0.1});
}

TEST_CASE("schema and value errors carry JSON pointers") {
  CHECK(pointer_of<ValueError>(with(R"("p": 2)", R"("p": 0.5)")) == "/operator/p");
  CHECK(pointer_of<ValueError>(with(R"("p": 2)", R"("p": "1/2")")) == "/operator/p");
  CHECK(pointer_of<SchemaError>(with(R"("d": 1)", R"("d": 3)")) == "/space/d");
  CHECK(pointer_of<SchemaError>(with(R"("p": 2)", R"("p": 2, "foo": 1)")) == "/operator/foo");
  CHECK(pointer_of<SchemaError>(with(R"("p": 2)", R"("p": 2, "g": {"kind": "power", "zz": 0})")) ==
        "/operator/g/zz");
  CHECK(pointer_of<SchemaError>(with(R"("T": 0.1)", R"("T": "soon")")) == "/time/T");
  // overflowing literals never reach the schema: the JSON parser rejects them
  CHECK_THROWS_AS(parse_config_text(with(R"("T": 0.1)", R"("T": 1e400)")), ConfigError);
  CHECK(pointer_of<SchemaError>(with(R"("kind": "mode")", R"("kind": "wiggle")")) == "/u0/kind");
  CHECK(pointer_of<SchemaError>(R"({"space": {"kind": "dirichlet-sine", "d": 1}})") == "/time");
  CHECK(pointer_of<SchemaError>(with(R"("mode": 1})", R"("mode": 1}, "extra": true)")) == "/extra");
  CHECK(pointer_of<ValueError>(with(R"("p": 2)", R"("p": 2, "convection": true)")) == "/operator/convection");
  CHECK(pointer_of<SchemaError>("{ not json") == "");
}

TEST_CASE("non-finite numbers in a document are value errors") {
  auto doc = nlohmann::json::parse(kMinimal);
  doc["time"]["T"] = std::numeric_limits<double>::infinity();
  try {
    parse_config(doc);
    FAIL("accepted T = inf");
  } catch (const ValueError& e) {
    CHECK(e.pointer() == "/time/T");
  }
  doc = nlohmann::json::parse(kMinimal);
  doc["operator"]["delta"] = std::nan("");
  CHECK_THROWS_AS(parse_config(doc), ValueError);
}

TEST_CASE("inadmissible growth is a warning") {
  const auto rc = parse_config_text(with(R"("p": 2)", R"("p": 2, "g": {"kind": "power", "a": 1, "r": "7"})"));
  REQUIRE(rc.warnings.size() == 1);
  CHECK(rc.warnings[0].find("r0 = 6") != std::string::npos);
}

TEST_CASE("round trip") {
  for (const auto& name : builtin_names()) {
    const auto rc = builtin_config(name);
    const auto back = parse_config_text(serialize_config(rc));
    CHECK(back == rc);
    CHECK(config_digest(back) == config_digest(rc));
    CHECK(serialize_config(back) == serialize_config(rc));
  }
  auto rc = builtin_config("scalar");
  rc.problem.op.g->kind = NemytskiiSpec::Kind::sum;
  rc.problem.op.g->c = -0.25;
  rc.problem.op.g->r = Rational(7, 3);
  rc.problem.op.g->c7 = TimeProfile::exp_of(0.1, 2.0);
  rc.problem.op.constants.C2.kind = TimeProfile::Kind::sine;
  rc.problem.op.constants.C2.value = 2.0;
  rc.problem.op.constants.C2.amplitude = 0.5;
  rc.problem.op.constants.C2.omega = 3.0;
  rc.problem.f.time.kind = TimeProfile::Kind::step;
  rc.problem.f.time.value = 0.1;
  rc.problem.f.time.amplitude = 0.3;
  rc.problem.f.time.t0 = 0.05;
  rc.problem.u0.kind = InitialSpec::Kind::coeffs;
  rc.problem.u0.coeffs = {0.1, 1.0 / 3.0, -2e-17};
  rc.check.t_samples = {0.0, 0.01};
  const auto back = parse_config_text(serialize_config(rc));
  CHECK(back == rc);
  CHECK(config_digest(rc) != config_digest(builtin_config("scalar")));
}

TEST_CASE("repository configs match the built-in problems") {
  for (const auto& name : builtin_names()) {
    const auto rc = parse_config_file(std::string(GALERKIN_SOURCE_DIR) + "/configs/" + name + ".json");
    CHECK_MESSAGE(rc == builtin_config(name), name);
  }
  CHECK_THROWS_AS(parse_config_file("/nonexistent/config.json"), ConfigError);
}

TEST_CASE("digest is pinned") {
  // guards the canonical form: changing it invalidates stored manifests
  CHECK(config_digest(builtin_config("heat")).rfind("fnv1a64:", 0) == 0);
  CHECK(config_digest(builtin_config("heat")).size() == 24);
  // only the name differs
  CHECK_NE(config_digest(builtin_config("heat")), config_digest(parse_config_text(kMinimal)));
  auto named = parse_config_text(kMinimal);
  named.problem.name = "heat";
  CHECK(config_digest(named) == config_digest(builtin_config("heat")));
}
