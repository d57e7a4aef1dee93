#include "galerkin/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <stdexcept>

namespace galerkin {

using nlohmann::json;

namespace {

// JSON has no infinities; margins and constants can be +inf
json number(double x) {
  if (std::isfinite(x)) return x;
  if (std::isnan(x)) return "nan";
  return x > 0 ? "inf" : "-inf";
}

json optional_rational(const std::optional<Rational>& r, const char* missing) {
  if (r) return to_string(*r);
  return missing;
}

}  // namespace

std::string format_double(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

json to_json(const CheckReport& r) {
  json fitted = json::object();
  for (const auto& [k, v] : r.fitted_constants) fitted[k] = number(v);
  json j{{"name", r.name},
         {"passed", r.passed},
         {"samples", r.samples},
         {"worst_margin", number(r.worst_margin)},
         {"worst_witness", r.worst_witness},
         {"tolerance", number(r.tolerance)},
         {"fitted_constants", fitted}};
  if (!r.note.empty()) j["note"] = r.note;
  return j;
}

json to_json(const std::vector<CheckReport>& reports) {
  json arr = json::array();
  for (const auto& r : reports) arr.push_back(to_json(r));
  return arr;
}

json to_json(const ExponentReport& r) {
  return json{{"d", r.d},
              {"p", to_string(r.p)},
              {"p_prime", to_string(r.p_prime)},
              {"sigma", optional_rational(r.sigma, "inf")},
              {"sigma_prime", to_string(r.sigma_prime)},
              {"r0", to_string(r.r0)},
              {"r_fluid", optional_rational(r.r_fluid, "undefined")},
              {"two_pprime", to_string(r.two_pprime)},
              {"lambda", optional_rational(r.lambda, "undefined")},
              {"flags",
               {{"scalar_admissible", r.scalar_admissible},
                {"fluid_admissible", r.fluid_admissible},
                {"two_pprime_le_r", r.two_pprime_le_r},
                {"interpolation_ok", r.interpolation_ok},
                {"sigma_gt_r0", r.sigma_gt_r0}}}};
}

void write_trajectory_csv(std::ostream& os, const Trajectory& traj) {
  const std::size_t n = traj.fields.empty() ? 0 : traj.fields.front().size();
  os << "step,t,norm_H";
  for (std::size_t i = 1; i <= n; ++i) os << ",c_" << i;
  os << '\n';
  for (std::size_t k = 0; k < traj.fields.size(); ++k) {
    os << k << ',' << format_double(traj.times[k]) << ',' << format_double(norm_H(traj.fields[k]));
    for (double c : traj.fields[k].coeffs) os << ',' << format_double(c);
    os << '\n';
  }
}

json to_json(const RunManifest& m) {
  json timings = json::object();
  for (const auto& [k, v] : m.timings) timings[k] = v;
  return json{{"tool", "galerkin"},
              {"tool_version", m.tool_version},
              {"config_digest", m.config_digest},
              {"seed", m.seed},
              {"artifacts", m.artifacts},
              {"timings_s", timings}};
}

void write_json_file(const std::string& path, const json& doc) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out << doc.dump(2) << '\n';
}

}  // namespace galerkin
