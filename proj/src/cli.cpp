#include "galerkin/cli.hpp"

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

#include "galerkin/convlab.hpp"
#include "galerkin/exponents.hpp"
#include "galerkin/io.hpp"
#include "galerkin/simd/kernels.hpp"
#include "galerkin/verify.hpp"

namespace galerkin::cli {

using nlohmann::json;

namespace {

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

CheckReport convection_cancellation(const SpacePtr& space, const SamplingOptions& opt,
                                    std::mt19937_64& rng) {
  CheckReport rep;
  rep.name = "convection-cancellation";
  rep.tolerance = 0.0;
  const auto fields = sample_fields(space, opt.field_samples, opt.scales, rng);
  for (std::size_t i = 0; i < fields.size(); ++i) {
    const auto& u = fields[i];
    const double v = simd::dot(convection_apply(u), u.coeffs);
    const double bound = 1e-10 * (1.0 + std::pow(norm_H(u), 3));
    rep.observe((bound - std::abs(v)) / bound, "sample=" + std::to_string(i) + " pairing=" + format_double(v));
  }
  rep.finish();
  return rep;
}

void print_warnings(const RunConfig& config, std::ostream& log) {
  for (const auto& w : config.warnings) log << "warning: " << w << '\n';
}

}  // namespace

std::vector<int> parse_levels(const std::string& text) {
  std::vector<int> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    int v = 0;
    try {
      v = std::stoi(item, &used);
    } catch (const std::exception&) {
      throw LevelError("bad level '" + item + "'");
    }
    if (used != item.size()) throw LevelError("bad level '" + item + "'");
    if (v < 1) throw LevelError("levels must be >= 1");
    if (!out.empty() && v <= out.back()) throw LevelError("levels must be strictly increasing");
    out.push_back(v);
  }
  if (out.empty()) throw LevelError("empty level list");
  return out;
}

json check_bundle(const RunConfig& config, std::uint64_t seed) {
  const auto& pr = config.problem;
  const auto A = build_family(pr.op);
  const auto space = build_space(pr.space, config.check.level);
  std::mt19937_64 rng(seed);

  SamplingOptions opt;
  opt.t_samples = config.check_times();
  opt.field_samples = config.check.field_samples;
  opt.tolerance = config.check.tolerance;

  std::vector<CheckReport> reports;
  const auto& c = pr.op.constants;
  reports.push_back(check_coercivity(A, space, opt, c.c1, c.C2, rng));
  reports.push_back(check_growth(A, space, opt, {c.c3, c.c4, c.q, c.C5}, config.check.fit, rng));
  reports.push_back(check_monotone(*A.find(PartKind::p_laplace), space, config.check.pair_samples,
                                   config.check.tolerance, rng));
  if (pr.op.g)
    for (auto& r : certify_g(*pr.op.g, pr.op.p, pr.space.dim, pr.T)) reports.push_back(std::move(r));
  if (pr.op.convection) reports.push_back(convection_cancellation(space, opt, rng));

  bool passed = true;
  for (const auto& r : reports) passed = passed && r.passed;
  return json{{"config_digest", config_digest(config)},
              {"seed", seed},
              {"level", config.check.level},
              {"passed", passed},
              {"checks", to_json(reports)},
              {"exponents", to_json(exponent_report(pr.space.dim, pr.op.p))},
              {"warnings", config.warnings}};
}

int cmd_check(const RunConfig& config, std::uint64_t seed, const std::string& out, std::ostream& log) {
  print_warnings(config, log);
  const json bundle = check_bundle(config, seed);
  if (out.empty() || out == "-") {
    std::cout << bundle.dump(2) << '\n';
  } else {
    write_json_file(out, bundle);
  }
  for (const auto& r : bundle["checks"])
    if (!r["passed"].get<bool>())
      log << "FAIL " << r["name"].get<std::string>() << " worst_margin=" << r["worst_margin"].dump() << '\n';
  return bundle["passed"].get<bool>() ? Exit::ok : Exit::failed;
}

int cmd_solve(const RunConfig& config, int level, const std::string& out_dir, std::ostream& log) {
  print_warnings(config, log);
  const auto& pr = config.problem;
  namespace fs = std::filesystem;
  fs::create_directories(out_dir);
  RunManifest manifest;
  manifest.config_digest = config_digest(config);

  const auto A = build_family(pr.op);
  const auto t0 = std::chrono::steady_clock::now();
  Trajectory traj;
  try {
    traj = solve_trajectory(pr, A, build_space(pr.space, level), level);
  } catch (const StepError& e) {
    log << "solve failed: " << e.what() << " (residual " << e.residual() << ")\n";
    return Exit::failed;
  }
  manifest.timings["solve"] = seconds_since(t0);

  const auto t1 = std::chrono::steady_clock::now();
  const auto audits = audit_trajectory(traj, A, pr.f, pr.newton_tol);
  manifest.timings["audit"] = seconds_since(t1);
  bool passed = true;
  for (const auto& r : audits) passed = passed && r.passed;

  int newton_total = 0;
  for (const auto& rec : traj.records) newton_total += rec.newton_iterations;
  const auto td = time_derivative_pairings(traj, pr.space.smoothness, A.p());
  json audit{{"passed", passed},
             {"level", level},
             {"steps", traj.steps()},
             {"newton_iterations", newton_total},
             {"time_derivative_Zstar", format_double(td.composite)},
             {"final_norm_H", norm_H(traj.fields.back())},
             {"checks", to_json(audits)}};

  const std::string csv_path = (fs::path(out_dir) / "trajectory.csv").string();
  const std::string audit_path = (fs::path(out_dir) / "audit.json").string();
  const std::string manifest_path = (fs::path(out_dir) / "manifest.json").string();
  {
    std::ofstream os(csv_path);
    if (!os) throw std::runtime_error("cannot write '" + csv_path + "'");
    write_trajectory_csv(os, traj);
  }
  write_json_file(audit_path, audit);
  manifest.artifacts = {csv_path, audit_path, manifest_path};
  write_json_file(manifest_path, to_json(manifest));
  for (const auto& r : audits)
    if (!r.passed) log << "FAIL " << r.name << " worst_margin=" << format_double(r.worst_margin) << '\n';
  return passed ? Exit::ok : Exit::failed;
}

int cmd_converge(const RunConfig& config, const std::vector<int>& levels, const std::string& out,
                 std::ostream& log) {
  print_warnings(config, log);
  const auto& pr = config.problem;
  LevelStudy study;
  try {
    study = cauchy_study(pr, levels);
  } catch (const StepError& e) {
    log << "solve failed: " << e.what() << '\n';
    return Exit::failed;
  }
  const auto A = build_family(pr.op);
  const auto h = hirano_diagnostic(study, A);
  const std::size_t nmodes = std::min<std::size_t>(2, study.trajectories.back().fields[0].size());
  std::vector<std::size_t> modes;
  for (std::size_t j = 0; j < nmodes; ++j) modes.push_back(j);
  const auto w = weak_limit_check(study, A, modes);
  if (out.empty() || out == "-") {
    write_study_csv(std::cout, study, h, w);
  } else {
    std::ofstream os(out);
    if (!os) throw std::runtime_error("cannot write '" + out + "'");
    write_study_csv(os, study, h, w);
  }
  return Exit::ok;
}

int cmd_exponents(int d, const std::string& p, std::ostream& out, std::ostream& log) {
  try {
    out << to_json(exponent_report(d, parse_rational(p))).dump(2) << '\n';
  } catch (const ConfigError& e) {
    log << "error: " << e.what() << '\n';
    return Exit::usage;
  }
  return Exit::ok;
}

}  // namespace galerkin::cli
