#pragma once
// Runtime checkers for the structural hypotheses: coercivity and growth
// sampling, monotonicity, Nemytskii certification, exponent arithmetic and
// trajectory audits. Checkers report margins; they never throw on failure.

#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "galerkin/operators.hpp"
#include "galerkin/rational.hpp"
#include "galerkin/solver.hpp"

namespace galerkin {

struct CheckReport {
  std::string name;
  bool passed = true;
  std::size_t samples = 0;
  double worst_margin = 0.0;  // most negative slack observed
  std::string worst_witness;
  std::map<std::string, double> fitted_constants;
  double tolerance = 1e-8;
  std::string note;

  /// Records one sample; margins below the current worst replace the witness.
  void observe(double margin, const std::string& witness);
  void finish() { passed = worst_margin >= -tolerance; }
};

struct SamplingOptions {
  std::vector<double> t_samples{0.0};
  std::size_t field_samples = 20;
  std::vector<double> scales{1e-2, 1e-1, 1.0, 1e1, 1e2};
  double tolerance = 1e-8;
};

/// Random fields: i.i.d. normal coefficients, unit H-norm direction, times
/// lambda cycling through `scales`.
std::vector<DiscreteField> sample_fields(const SpacePtr& space, std::size_t count,
                                         const std::vector<double>& scales, std::mt19937_64& rng);

/// Lower estimate of sup { <w, v> : v in V_n, ||v||_V = 1 } by preconditioned
/// gradient ascent from 8 starts (Riesz representer, `hint` if given, random).
double discrete_dual_norm(std::span<const double> w, const SpacePtr& space, int level, double p,
                          std::mt19937_64& rng, const DiscreteField* hint = nullptr);

/// Exact dual norm for p = 2: (sum w_k^2 / |k|^2)^{1/2}.
double dual_norm_H1(std::span<const double> w, const SpectralSpace& space);

/// <w, R>/||R||_V with R the H^1_0 Riesz representer of w; a lower bound.
double riesz_ratio(std::span<const double> w, const SpacePtr& space, int level, double p);

CheckReport check_coercivity(const OperatorFamily& A, const SpacePtr& space,
                             const SamplingOptions& opt, double c1, const TimeProfile& C2,
                             std::mt19937_64& rng);

struct GrowthConstants {
  double c3 = 1.0;
  double c4 = 0.0;
  double q = 0.0;
  TimeProfile C5;
};

/// With fit = true the report also carries the smallest (c3, c4) (least
/// c3 + c4, ties to smaller c4) for which every sample passes.
CheckReport check_growth(const OperatorFamily& A, const SpacePtr& space,
                         const SamplingOptions& opt, const GrowthConstants& declared, bool fit,
                         std::mt19937_64& rng);

CheckReport check_monotone(const OperatorPart& B, const SpacePtr& space, std::size_t pairs,
                           double tolerance, std::mt19937_64& rng);
CheckReport check_monotone(const OperatorFamily& A, const SpacePtr& space, std::size_t pairs,
                           double tolerance, std::mt19937_64& rng);

/// g1-continuity, g2-admissibility (exact), g2-growth and g3-sign (sampled on
/// a (t, x, s) grid over [0, T]).
std::vector<CheckReport> certify_g(const NemytskiiSpec& g, const Rational& p, int d, double T);

/// Smallest (c3, c4) >= 0, minimising c3 + c4, with c3 a_i + c4 b_i >= L_i.
/// Returns nullopt when infeasible.
std::optional<std::pair<double, double>> fit_growth_lp(const std::vector<double>& a,
                                                       const std::vector<double>& b,
                                                       const std::vector<double>& L);

struct AuditOptions {
  double energy_tolerance = 1e-9;
  double bound_tolerance = 1e-9;
  double residual_factor = 10.0;  // scheme residual <= factor * newton_tol
};

/// energy-inequality, a-priori-bound, induced-operator-bound and
/// scheme-residual on a stored trajectory.
std::vector<CheckReport> audit_trajectory(const Trajectory& traj, const OperatorFamily& A,
                                          const ForcingSpec& f, double newton_tol,
                                          const AuditOptions& opt = {});

}  // namespace galerkin
