#pragma once
// Implicit Euler integration of the Galerkin system
//   (u^{k+1} - u^k)/tau + A(t^{k+1}) u^{k+1} = f(t^{k+1})   in V_n,
// solved by damped Newton. Testing the scheme with u^{k+1} yields the discrete
// energy inequality monitored by the audits.

#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "galerkin/operators.hpp"
#include "galerkin/spaces.hpp"

namespace galerkin {

struct SpaceSpec {
  SpaceKind kind = SpaceKind::dirichlet_sine;
  int dim = 1;
  double smoothness = 2.0;
  int quad_order = 0;  // 0 -> per-level default
  bool operator==(const SpaceSpec&) const = default;
};

struct OperatorSpec {
  Rational p = 2;
  double delta = 0.0;
  bool convection = false;
  std::optional<NemytskiiSpec> g;
  DeclaredConstants constants;
  bool operator==(const OperatorSpec&) const = default;
};

/// Named initial profile.
struct InitialSpec {
  enum class Kind { zero, mode, coeffs, parabola, bump, taylor_green };
  Kind kind = Kind::mode;
  std::size_t mode = 1;  // 1-based
  double amplitude = 1.0;
  std::vector<double> coeffs;
  bool operator==(const InitialSpec&) const = default;
};
std::string to_string(InitialSpec::Kind kind);

struct ProblemConfig {
  std::string name;
  SpaceSpec space;
  OperatorSpec op;
  ForcingSpec f;
  InitialSpec u0;
  double T = 1.0;
  int nsteps = 10;
  double newton_tol = 1e-10;
  int newton_maxit = 50;
  bool operator==(const ProblemConfig&) const = default;
};

OperatorFamily build_family(const OperatorSpec& spec);
SpacePtr build_space(const SpaceSpec& spec, int level);

/// Mode truncation P_n u0 of the profile's analytic expansion.
DiscreteField project_initial(const SpacePtr& space, int level, const InitialSpec& u0);

struct StepRecord {
  double tau = 0.0;         // step leading to this time level (0 for k = 0)
  double a_pairing = 0.0;   // <A(t^k) u^k, u^k>
  double f_pairing = 0.0;   // <f(t^k), u^k>
  int newton_iterations = 0;
};

struct Trajectory {
  SpacePtr space;
  int level = 0;
  std::vector<double> times;
  std::vector<DiscreteField> fields;
  std::vector<StepRecord> records;
  std::size_t steps() const noexcept { return fields.empty() ? 0 : fields.size() - 1; }
};

struct StepOutcome {
  DiscreteField u;
  int iterations = 0;
  double residual = 0.0;
};

/// Newton driver for one family/forcing pair. The LU factorisation of the
/// Jacobian is kept between iterations and steps and only rebuilt when the
/// contraction stalls (ratio > 1/2), a line search fails, or tau changes.
class StepSolver {
 public:
  StepSolver(const OperatorFamily& A, const ForcingSpec& f, double tol, int maxit);

  StepOutcome step(const DiscreteField& u_prev, double t_next, double tau);
  /// (c - c_prev)/tau + A(t)c - F
  std::vector<double> residual(const DiscreteField& u, const DiscreteField& u_prev, double t,
                               double tau) const;
  int jacobian_builds() const noexcept { return builds_; }

 private:
  void factor(const DiscreteField& u, double t, double tau);

  const OperatorFamily& A_;
  ForcingSpec f_;
  double tol_;
  int maxit_;
  Eigen::PartialPivLU<Eigen::MatrixXd> lu_;
  bool have_lu_ = false;
  double lu_tau_ = 0.0;
  std::size_t lu_size_ = 0;
  int builds_ = 0;
};

/// Single step with a fresh Jacobian.
StepOutcome implicit_euler_step(const OperatorFamily& A, const ForcingSpec& f,
                                const DiscreteField& u_prev, double t_next, double tau,
                                double tol = 1e-10, int maxit = 50);

/// Failing steps are retried as two half steps, at most 5 times nested.
Trajectory solve_trajectory(const ProblemConfig& config, int level);
Trajectory solve_trajectory(const ProblemConfig& config, const OperatorFamily& A,
                            const SpacePtr& space, int level);

struct TimeDerivativeNorms {
  std::vector<double> per_step;  // ||(u^{k+1} - u^k)/tau||_{Z*}
  double composite = 0.0;        // L^{p'}(0,T;Z*) by step quadrature
};
TimeDerivativeNorms time_derivative_pairings(const Trajectory& traj, double s, double p);

}  // namespace galerkin
