#pragma once
// JSON problem configurations. The schema is documented in docs/config_schema.md.

#include <string>
#include <vector>

#include <json.hpp>

#include "galerkin/errors.hpp"
#include "galerkin/solver.hpp"

namespace galerkin {

/// Unknown key, missing key, wrong type or unsupported enumerator. `pointer`
/// is the JSON pointer of the offending location.
class SchemaError : public ConfigError {
 public:
  SchemaError(const std::string& pointer, const std::string& what)
      : ConfigError(pointer + ": " + what), pointer_(pointer) {}
  const std::string& pointer() const noexcept { return pointer_; }

 private:
  std::string pointer_;
};

/// Well-typed but out-of-range or non-finite value.
class ValueError : public ConfigError {
 public:
  ValueError(const std::string& pointer, const std::string& what)
      : ConfigError(pointer + ": " + what), pointer_(pointer) {}
  const std::string& pointer() const noexcept { return pointer_; }

 private:
  std::string pointer_;
};

struct CheckSettings {
  int level = 4;
  std::vector<double> t_samples;  // empty -> {0, T/2, T}
  std::size_t field_samples = 20;
  std::size_t pair_samples = 100;
  double tolerance = 1e-8;
  bool fit = true;
  bool operator==(const CheckSettings&) const = default;
};

struct RunConfig {
  ProblemConfig problem;
  CheckSettings check;
  std::vector<std::string> warnings;  // exponent admissibility, not part of equality

  bool operator==(const RunConfig& o) const { return problem == o.problem && check == o.check; }
  std::vector<double> check_times() const;
};

RunConfig parse_config(const nlohmann::json& doc);
RunConfig parse_config_text(const std::string& text);
/// Throws ConfigError when the file cannot be read.
RunConfig parse_config_file(const std::string& path);

nlohmann::json to_json(const RunConfig& config);
/// Pretty-printed, keys sorted.
std::string serialize_config(const RunConfig& config);

/// "fnv1a64:<16 hex digits>" of the compact canonical dump.
std::string config_digest(const RunConfig& config);

/// "heat", "scalar" or "fluid".
RunConfig builtin_config(const std::string& name);
std::vector<std::string> builtin_names();

}  // namespace galerkin
