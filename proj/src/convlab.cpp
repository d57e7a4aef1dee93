#include "galerkin/convlab.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <ostream>
#include <thread>

#include "galerkin/errors.hpp"
#include "galerkin/simd/kernels.hpp"

namespace galerkin {

unsigned worker_threads() {
  if (const char* env = std::getenv("GALERKIN_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return static_cast<unsigned>(v);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

namespace {

void require_shared_grid(const LevelStudy& s) {
  const auto& ref = s.trajectories.back().times;
  for (const auto& tr : s.trajectories)
    if (tr.times != ref) throw LevelError("levels ended on different time grids (step bisection)");
}

}  // namespace

LevelStudy cauchy_study(const ProblemConfig& config, const std::vector<int>& levels) {
  if (levels.empty()) throw LevelError("level ladder is empty");
  for (std::size_t i = 0; i < levels.size(); ++i) {
    if (levels[i] < 1) throw LevelError("levels must be >= 1");
    if (i > 0 && levels[i] <= levels[i - 1]) throw LevelError("levels must be strictly increasing");
  }
  LevelStudy study;
  study.levels = levels;
  study.p = to_double(config.op.p);
  study.trajectories.resize(levels.size());

  const auto A = build_family(config.op);
  std::vector<std::exception_ptr> errors(levels.size());
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i; (i = next.fetch_add(1)) < levels.size();) {
      try {
        study.trajectories[i] = solve_trajectory(config, A, build_space(config.space, levels[i]), levels[i]);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const unsigned nthreads = std::min<unsigned>(worker_threads(), static_cast<unsigned>(levels.size()));
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < nthreads; ++t) pool.emplace_back(work);
  work();
  for (auto& th : pool) th.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  require_shared_grid(study);

  const auto& ref = study.trajectories.back();
  const std::size_t K = ref.steps();
  for (const auto& tr : study.trajectories) {
    double acc = 0.0, sup = 0.0;
    for (std::size_t k = 0; k <= K; ++k) {
      const auto diff = embed(tr.fields[k], ref.space, ref.level) - ref.fields[k];
      sup = std::max(sup, norm_H(diff));
      if (k < K) acc += (ref.times[k + 1] - ref.times[k]) * std::pow(norm_V(diff, study.p), study.p);
    }
    study.e_V.push_back(std::pow(acc, 1.0 / study.p));
    study.e_H.push_back(sup);
  }
  return study;
}

std::vector<double> hirano_diagnostic(const LevelStudy& study, const OperatorFamily& A) {
  const auto& ref = study.trajectories.back();
  const std::size_t K = ref.steps();
  std::vector<double> h;
  for (const auto& tr : study.trajectories) {
    double acc = 0.0;
    for (std::size_t k = 0; k < K; ++k) {
      const auto un = embed(tr.fields[k], ref.space, ref.level);
      const auto diff = un - ref.fields[k];
      acc += (ref.times[k + 1] - ref.times[k]) * simd::dot(A.apply(un, ref.times[k]), diff.coeffs);
    }
    h.push_back(acc);
  }
  return h;
}

std::vector<std::vector<double>> weak_limit_check(const LevelStudy& study, const OperatorFamily& A,
                                                  const std::vector<std::size_t>& test_modes) {
  const auto& ref = study.trajectories.back();
  const std::size_t K = ref.steps();
  for (std::size_t m : test_modes)
    if (m >= ref.space->size(ref.level)) throw LevelError("test field outside the reference level");
  std::vector<std::vector<double>> w(study.trajectories.size(), std::vector<double>(test_modes.size(), 0.0));
  for (std::size_t k = 0; k < K; ++k) {
    const double tau = ref.times[k + 1] - ref.times[k], t = ref.times[k];
    const auto aref = A.apply(ref.fields[k], t);
    for (std::size_t n = 0; n < study.trajectories.size(); ++n) {
      const auto an = A.apply(embed(study.trajectories[n].fields[k], ref.space, ref.level), t);
      for (std::size_t j = 0; j < test_modes.size(); ++j)
        w[n][j] += tau * (an[test_modes[j]] - aref[test_modes[j]]);
    }
  }
  return w;
}

void write_study_csv(std::ostream& os, const LevelStudy& study, const std::vector<double>& h,
                     const std::vector<std::vector<double>>& w) {
  const std::size_t nw = w.empty() ? 0 : w.front().size();
  os << "n,e_V,e_H,h";
  for (std::size_t j = 0; j < nw; ++j) os << ",w_" << (j + 1);
  os << '\n';
  char buf[64];
  auto put = [&](double v) {
    std::snprintf(buf, sizeof buf, "%.17g", v);
    os << ',' << buf;
  };
  for (std::size_t i = 0; i < study.levels.size(); ++i) {
    os << study.levels[i];
    put(study.e_V[i]);
    put(study.e_H[i]);
    put(h[i]);
    for (std::size_t j = 0; j < nw; ++j) put(w[i][j]);
    os << '\n';
  }
}

}  // namespace galerkin
