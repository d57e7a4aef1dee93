#include "galerkin/solver.hpp"

#include <cmath>
#include <numbers>

#include "galerkin/errors.hpp"
#include "galerkin/simd/kernels.hpp"

namespace galerkin {

namespace {

constexpr double kPi = std::numbers::pi;

double norm2(const std::vector<double>& v) { return std::sqrt(simd::dot(v, v)); }

// sqrt2 * int_0^1 x(1-x) sin(k pi x) dx
double parabola_coeff(int k) {
  if (k % 2 == 0) return 0.0;
  const double kp = k * kPi;
  return 4.0 * std::sqrt(2.0) / (kp * kp * kp);
}

constexpr int max_bisections = 5;

}  // namespace

std::string to_string(InitialSpec::Kind kind) {
  switch (kind) {
    case InitialSpec::Kind::zero:
      return "zero";
    case InitialSpec::Kind::mode:
      return "mode";
    case InitialSpec::Kind::coeffs:
      return "coeffs";
    case InitialSpec::Kind::parabola:
      return "parabola";
    case InitialSpec::Kind::bump:
      return "bump";
    case InitialSpec::Kind::taylor_green:
      return "taylor-green";
  }
  return "zero";
}

OperatorFamily build_family(const OperatorSpec& spec) {
  std::vector<PartPtr> parts;
  const double p = to_double(spec.p);
  parts.push_back(std::make_shared<PLaplacePart>(p, spec.delta));
  if (spec.g) parts.push_back(std::make_shared<NemytskiiPart>(*spec.g));
  if (spec.convection) parts.push_back(std::make_shared<ConvectionPart>());
  return OperatorFamily(spec.p, spec.delta, std::move(parts), spec.constants);
}

SpacePtr build_space(const SpaceSpec& spec, int level) {
  return make_space(spec.kind, spec.dim, level, spec.smoothness, spec.quad_order);
}

DiscreteField project_initial(const SpacePtr& space, int level, const InitialSpec& u0) {
  DiscreteField out = zero_field(space, level);
  const double a = u0.amplitude;
  switch (u0.kind) {
    case InitialSpec::Kind::zero:
      break;
    case InitialSpec::Kind::mode:
      if (u0.mode < 1) throw ConfigError("initial mode index is 1-based");
      if (u0.mode <= out.size()) out.coeffs[u0.mode - 1] = a;
      break;
    case InitialSpec::Kind::coeffs:
      for (std::size_t i = 0; i < std::min(out.size(), u0.coeffs.size()); ++i)
        out.coeffs[i] = a * u0.coeffs[i];
      break;
    case InitialSpec::Kind::parabola:
      // x(1-x) [y(1-y)]
      if (space->kind() != SpaceKind::dirichlet_sine)
        throw KindError("parabola initial data needs a dirichlet-sine space");
      for (std::size_t i = 0; i < out.size(); ++i) {
        const auto& k = space->mode(i).k;
        out.coeffs[i] = a * parabola_coeff(k[0]) * (space->dim() == 2 ? parabola_coeff(k[1]) : 1.0);
      }
      break;
    case InitialSpec::Kind::bump:
      // prod sin(pi x_i) = phi_1 / sqrt(2)^d
      if (space->kind() != SpaceKind::dirichlet_sine)
        throw KindError("bump initial data needs a dirichlet-sine space");
      out.coeffs[0] = a * std::pow(std::sqrt(0.5), space->dim());
      break;
    case InitialSpec::Kind::taylor_green:
      // (sin x cos y, -cos x sin y) against sin-type fields with k = (1, +-1)
      if (space->kind() != SpaceKind::torus_divfree)
        throw KindError("taylor-green initial data needs a torus-divfree space");
      for (std::size_t i = 0; i < out.size(); ++i) {
        const auto& m = space->mode(i);
        if (m.parity != 1 || m.k[0] != 1 || std::abs(m.k[1]) != 1) continue;
        out.coeffs[i] = m.k[1] == 1 ? -a * kPi : a * kPi;
      }
      break;
  }
  for (double c : out.coeffs)
    if (!std::isfinite(c)) throw ConfigError("initial data has non-finite coefficients");
  return out;
}

// ------------------------------------------------------------ Newton

StepSolver::StepSolver(const OperatorFamily& A, const ForcingSpec& f, double tol, int maxit)
    : A_(A), f_(f), tol_(tol), maxit_(maxit) {
  if (!(tol > 0.0)) throw ConfigError("newton tolerance must be > 0");
  if (maxit < 1) throw ConfigError("newton maxit must be >= 1");
}

std::vector<double> StepSolver::residual(const DiscreteField& u, const DiscreteField& u_prev,
                                         double t, double tau) const {
  std::vector<double> r = A_.apply(u, t);
  const auto rhs = assemble_rhs(*u.space, u.level, f_, t);
  for (std::size_t k = 0; k < r.size(); ++k)
    r[k] += (u.coeffs[k] - u_prev.coeffs[k]) / tau - rhs[k];
  return r;
}

void StepSolver::factor(const DiscreteField& u, double t, double tau) {
  const std::size_t n = u.size();
  const auto jac = A_.jacobian(u, t);
  Eigen::MatrixXd J = Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(
      jac.data(), static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  J.diagonal().array() += 1.0 / tau;
  lu_.compute(J);
  have_lu_ = true;
  lu_tau_ = tau;
  lu_size_ = n;
  ++builds_;
}

StepOutcome StepSolver::step(const DiscreteField& u_prev, double t_next, double tau) {
  if (!(tau > 0.0)) throw ConfigError("time step must be > 0");
  const std::size_t n = u_prev.size();
  DiscreteField u = u_prev;
  auto r = residual(u, u_prev, t_next, tau);
  double nr = norm2(r);
  bool fresh = false;
  if (!have_lu_ || lu_tau_ != tau || lu_size_ != n) {
    factor(u, t_next, tau);
    fresh = true;
  }
  int it = 0;
  while (!(nr <= tol_)) {
    if (!std::isfinite(nr)) throw StepError("newton residual is not finite", nr);
    if (it >= maxit_)
      throw StepError("newton did not converge in " + std::to_string(maxit_) + " iterations", nr);
    const Eigen::Map<const Eigen::VectorXd> rv(r.data(), static_cast<Eigen::Index>(n));
    const Eigen::VectorXd dc = -lu_.solve(rv);

    bool accepted = false;
    DiscreteField trial = u;
    std::vector<double> r_trial;
    double nr_trial = 0.0;
    for (double alpha = 1.0; alpha >= 1.0 / 1024.0; alpha *= 0.5) {
      for (std::size_t k = 0; k < n; ++k) trial.coeffs[k] = u.coeffs[k] + alpha * dc[static_cast<Eigen::Index>(k)];
      r_trial = residual(trial, u_prev, t_next, tau);
      nr_trial = norm2(r_trial);
      if (nr_trial <= (1.0 - 1e-4 * alpha) * nr) {
        accepted = true;
        break;
      }
    }
    ++it;
    if (!accepted) {
      if (fresh) throw StepError("line search failed", nr);
      factor(u, t_next, tau);
      fresh = true;
      continue;
    }
    const double ratio = nr_trial / nr;
    u = std::move(trial);
    r = std::move(r_trial);
    nr = nr_trial;
    fresh = false;
    if (ratio > 0.5 && !(nr <= tol_)) {
      factor(u, t_next, tau);
      fresh = true;
    }
  }
  return {std::move(u), it, nr};
}

StepOutcome implicit_euler_step(const OperatorFamily& A, const ForcingSpec& f,
                                const DiscreteField& u_prev, double t_next, double tau, double tol,
                                int maxit) {
  StepSolver solver(A, f, tol, maxit);
  return solver.step(u_prev, t_next, tau);
}

// -------------------------------------------------------- trajectory

namespace {

StepRecord make_record(const OperatorFamily& A, const ForcingSpec& f, const DiscreteField& u,
                       double t, double tau, int iterations) {
  StepRecord rec;
  rec.tau = tau;
  rec.a_pairing = simd::dot(A.apply(u, t), u.coeffs);
  rec.f_pairing = simd::dot(assemble_rhs(*u.space, u.level, f, t), u.coeffs);
  rec.newton_iterations = iterations;
  return rec;
}

void advance(StepSolver& solver, const OperatorFamily& A, const ForcingSpec& f, Trajectory& traj,
             double tau, int depth) {
  const double t0 = traj.times.back();
  const double t1 = t0 + tau;
  try {
    auto out = solver.step(traj.fields.back(), t1, tau);
    traj.records.push_back(make_record(A, f, out.u, t1, tau, out.iterations));
    traj.times.push_back(t1);
    traj.fields.push_back(std::move(out.u));
  } catch (const StepError&) {
    if (depth >= max_bisections) throw;
    advance(solver, A, f, traj, 0.5 * tau, depth + 1);
    advance(solver, A, f, traj, t1 - traj.times.back(), depth + 1);
  }
}

}  // namespace

Trajectory solve_trajectory(const ProblemConfig& config, const OperatorFamily& A,
                            const SpacePtr& space, int level) {
  if (!(config.T > 0.0) || !std::isfinite(config.T)) throw ConfigError("T must be finite and > 0");
  if (config.nsteps < 0) throw ConfigError("nsteps must be >= 0");
  A.check_space(*space);
  Trajectory traj;
  traj.space = space;
  traj.level = level;
  auto u0 = project_initial(space, level, config.u0);
  traj.records.push_back(make_record(A, config.f, u0, 0.0, 0.0, 0));
  traj.times.push_back(0.0);
  traj.fields.push_back(std::move(u0));
  if (config.nsteps == 0) return traj;

  StepSolver solver(A, config.f, config.newton_tol, config.newton_maxit);
  const double tau = config.T / config.nsteps;
  for (int k = 0; k < config.nsteps; ++k) {
    // land exactly on the uniform grid
    const double target = k + 1 == config.nsteps ? config.T : (k + 1) * tau;
    try {
      advance(solver, A, config.f, traj, target - traj.times.back(), 0);
    } catch (const StepError& e) {
      throw StepError(std::string(e.what()) + " at step " + std::to_string(k), e.residual(), k);
    }
  }
  return traj;
}

Trajectory solve_trajectory(const ProblemConfig& config, int level) {
  const auto A = build_family(config.op);
  return solve_trajectory(config, A, build_space(config.space, level), level);
}

TimeDerivativeNorms time_derivative_pairings(const Trajectory& traj, double s, double p) {
  if (!(p > 1.0)) throw ConfigError("time derivative norms need p > 1");
  const double pp = p / (p - 1.0);
  TimeDerivativeNorms out;
  double acc = 0.0;
  for (std::size_t k = 0; k + 1 < traj.fields.size(); ++k) {
    const double tau = traj.times[k + 1] - traj.times[k];
    const auto& a = traj.fields[k].coeffs;
    const auto& b = traj.fields[k + 1].coeffs;
    std::vector<double> d(b.size());
    for (std::size_t i = 0; i < d.size(); ++i) d[i] = (b[i] - a[i]) / tau;
    const double z = dual_norm_Zstar(d, *traj.space, s);
    out.per_step.push_back(z);
    acc += tau * std::pow(z, pp);
  }
  out.composite = std::pow(acc, 1.0 / pp);
  return out;
}

}  // namespace galerkin
