#pragma once
// Report serialization: stable JSON for checks, exponents and manifests, CSV
// for trajectories. Floating point values round-trip exactly.

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "galerkin/exponents.hpp"
#include "galerkin/solver.hpp"
#include "galerkin/verify.hpp"

namespace galerkin {

inline constexpr const char* kToolVersion = "0.3.1";

nlohmann::json to_json(const CheckReport& report);
nlohmann::json to_json(const std::vector<CheckReport>& reports);
nlohmann::json to_json(const ExponentReport& report);

/// step, t, norm_H, c_1 ... c_n; %.17g.
void write_trajectory_csv(std::ostream& os, const Trajectory& traj);

struct RunManifest {
  std::string config_digest;
  std::uint64_t seed = 0;
  std::vector<std::string> artifacts;
  std::map<std::string, double> timings;  // seconds
  std::string tool_version = kToolVersion;
};
nlohmann::json to_json(const RunManifest& manifest);

/// Writes `doc.dump(2)` plus a trailing newline; throws std::runtime_error
/// when the file cannot be opened.
void write_json_file(const std::string& path, const nlohmann::json& doc);

std::string format_double(double x);

}  // namespace galerkin
