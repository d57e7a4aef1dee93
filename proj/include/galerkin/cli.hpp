#pragma once
// Subcommand implementations behind tools/galerkin. Each returns the process
// exit code: 0 success, 1 check/audit/solve failure, 2 usage or schema error.

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "galerkin/config.hpp"

namespace galerkin::cli {

enum Exit : int { ok = 0, failed = 1, usage = 2 };

/// Check bundle for a config; deterministic for a fixed seed.
nlohmann::json check_bundle(const RunConfig& config, std::uint64_t seed);

int cmd_solve(const RunConfig& config, int level, const std::string& out_dir, std::ostream& log);
int cmd_check(const RunConfig& config, std::uint64_t seed, const std::string& out, std::ostream& log);
int cmd_converge(const RunConfig& config, const std::vector<int>& levels, const std::string& out,
                 std::ostream& log);
int cmd_exponents(int d, const std::string& p, std::ostream& out, std::ostream& log);

/// "2,4,8" -> {2, 4, 8}; throws LevelError unless strictly increasing and >= 1.
std::vector<int> parse_levels(const std::string& text);

}  // namespace galerkin::cli
