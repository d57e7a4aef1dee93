#include "galerkin/verify.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>

#include "galerkin/errors.hpp"
#include "galerkin/simd/kernels.hpp"

namespace galerkin {

namespace {

std::string fmt(const char* format, auto... args) {
  char buf[256];
  std::snprintf(buf, sizeof buf, format, args...);
  return buf;
}

double rel_margin(double slack, double lhs, double rhs) {
  return slack / (1.0 + std::abs(lhs) + std::abs(rhs));
}

std::vector<double> part_apply(const OperatorPart& part, const DiscreteField& u, double t) {
  const auto& space = *u.space;
  part.check_space(space);
  const NodalField nodal = eval_on_quad(u);
  NodalField flux(space.channels(), space.nodes());
  part.add_flux(space, nodal, t, flux);
  return pair_with_basis(space, u.level, flux);
}

DiscreteField unit_direction(const SpacePtr& space, std::mt19937_64& rng) {
  std::normal_distribution<double> nd(0.0, 1.0);
  DiscreteField x = zero_field(space);
  for (double& c : x.coeffs) c = nd(rng);
  const double h = norm_H(x);
  for (double& c : x.coeffs) c /= h;
  return x;
}

// gradient-energy weights |k|^2 (pi^2 |k|^2 on the sine family)
double stiffness(const SpectralSpace& space, std::size_t i) { return space.mode(i).wavenumber_sq; }

double dual_norm_Hp_bound(std::span<const double> w, const SpectralSpace& space, double p) {
  // <w, v> <= |w|_{H^-1} |grad v|_2 <= |w|_{H^-1} |Omega|^{1/2 - 1/p} |grad v|_p  for p >= 2
  return dual_norm_H1(w, space) * std::pow(space.measure(), 0.5 - 1.0 / p);
}

// every 7th pair is diagonal (u = v), every 3rd a close pair probing local
// monotonicity, the rest independent
DiscreteField partner(const DiscreteField& u, double lam, std::size_t i, const SpacePtr& space,
                      std::mt19937_64& rng) {
  if (i % 7 == 0) return u;
  if (i % 3 == 0) return u + (1e-2 * lam) * unit_direction(space, rng);
  return lam * unit_direction(space, rng);
}

}  // namespace

void CheckReport::observe(double margin, const std::string& witness) {
  if (samples == 0 || margin < worst_margin) {
    worst_margin = margin;
    worst_witness = witness;
  }
  ++samples;
}

std::vector<DiscreteField> sample_fields(const SpacePtr& space, std::size_t count,
                                         const std::vector<double>& scales, std::mt19937_64& rng) {
  std::vector<DiscreteField> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    const double lam = scales.empty() ? 1.0 : scales[i % scales.size()];
    out.push_back(lam * unit_direction(space, rng));
  }
  return out;
}

double dual_norm_H1(std::span<const double> w, const SpectralSpace& space) {
  double acc = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) acc += w[i] * w[i] / stiffness(space, i);
  return std::sqrt(acc);
}

double riesz_ratio(std::span<const double> w, const SpacePtr& space, int level, double p) {
  DiscreteField r = zero_field(space, level);
  double num = 0.0;
  for (std::size_t i = 0; i < r.size(); ++i) {
    r.coeffs[i] = w[i] / stiffness(*space, i);
    num += w[i] * r.coeffs[i];
  }
  if (num == 0.0) return 0.0;
  return num / norm_V(r, p);
}

double discrete_dual_norm(std::span<const double> w, const SpacePtr& space, int level, double p,
                          std::mt19937_64& rng, const DiscreteField* hint) {
  const std::size_t n = space->size(level);
  if (w.size() != n) throw LevelError("functional length does not match the level");
  double wn = 0.0;
  for (double x : w) wn = std::max(wn, std::abs(x));
  if (wn == 0.0) return 0.0;

  // f(v) = <w, v>/||v||_V on the unit sphere; grad f = w - f B_p(v)
  auto value = [&](DiscreteField& v) {
    const double nv = norm_V(v, p);
    if (!(nv > 0.0)) return -std::numeric_limits<double>::infinity();
    for (double& c : v.coeffs) c /= nv;
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += w[i] * v.coeffs[i];
    if (s < 0.0) {
      for (double& c : v.coeffs) c = -c;
      s = -s;
    }
    return s;
  };

  std::vector<DiscreteField> starts;
  starts.push_back(zero_field(space, level));
  for (std::size_t i = 0; i < n; ++i) starts[0].coeffs[i] = w[i] / stiffness(*space, i);
  if (hint && hint->size() == n && norm_H(*hint) > 0.0) starts.push_back(*hint);
  std::normal_distribution<double> nd(0.0, 1.0);
  while (starts.size() < 8) {
    DiscreteField v = zero_field(space, level);
    for (std::size_t i = 0; i < n; ++i) v.coeffs[i] = nd(rng) / std::sqrt(stiffness(*space, i));
    starts.push_back(std::move(v));
  }

  double best = 0.0;
  for (auto& v : starts) {
    double f = value(v);
    if (!std::isfinite(f)) continue;
    double eta = 0.5;
    for (int it = 0; it < 80 && eta > 1e-10; ++it) {
      const auto b = p_laplace_apply(v, p, 0.0);
      DiscreteField d = zero_field(space, level);
      double dn = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        const double g = (w[i] - f * b[i]) / stiffness(*space, i);
        d.coeffs[i] = g;
        dn += stiffness(*space, i) * g * g;
      }
      dn = std::sqrt(dn);
      if (dn <= 1e-14 * (1.0 + f)) break;
      bool improved = false;
      while (eta > 1e-10) {
        DiscreteField trial = v;
        for (std::size_t i = 0; i < n; ++i) trial.coeffs[i] += eta / dn * d.coeffs[i];
        const double ft = value(trial);
        if (ft > f) {
          improved = ft - f > 1e-13 * f;
          v = std::move(trial);
          f = ft;
          eta = std::min(1.0, 2.0 * eta);
          break;
        }
        eta *= 0.5;
      }
      if (!improved) break;
    }
    best = std::max(best, f);
  }
  return best;
}

// ------------------------------------------------ coercivity / growth

CheckReport check_coercivity(const OperatorFamily& A, const SpacePtr& space,
                             const SamplingOptions& opt, double c1, const TimeProfile& C2,
                             std::mt19937_64& rng) {
  CheckReport rep;
  rep.name = "coercivity";
  rep.tolerance = opt.tolerance;
  const auto fields = sample_fields(space, opt.field_samples, opt.scales, rng);
  const double p = A.p();
  for (double t : opt.t_samples) {
    const DiscreteField zero = zero_field(space);
    {
      const double rhs = -C2(t);
      const double lhs = simd::dot(A.apply(zero, t), zero.coeffs);
      rep.observe(rel_margin(lhs - rhs, lhs, rhs), fmt("t=%.17g zero field", t));
    }
    for (std::size_t i = 0; i < fields.size(); ++i) {
      const auto& x = fields[i];
      const double lhs = simd::dot(A.apply(x, t), x.coeffs);
      const double rhs = c1 * std::pow(norm_V(x, p), p) - C2(t);
      rep.observe(rel_margin(lhs - rhs, lhs, rhs),
                  fmt("t=%.17g sample=%zu |x|_H=%.17g", t, i, norm_H(x)));
    }
  }
  rep.finish();
  return rep;
}

std::optional<std::pair<double, double>> fit_growth_lp(const std::vector<double>& a,
                                                       const std::vector<double>& b,
                                                       const std::vector<double>& L) {
  const std::size_t m = L.size();
  auto feasible = [&](double x, double y) {
    if (x < 0.0 || y < 0.0 || !std::isfinite(x) || !std::isfinite(y)) return false;
    for (std::size_t i = 0; i < m; ++i)
      if (a[i] * x + b[i] * y < L[i] - 1e-12 * std::abs(L[i])) return false;
    return true;
  };
  // lines: c3 = 0, c4 = 0 and a_i c3 + b_i c4 = L_i
  struct Line {
    double a, b, L;
  };
  std::vector<Line> lines{{1.0, 0.0, 0.0}, {0.0, 1.0, 0.0}};
  for (std::size_t i = 0; i < m; ++i)
    if (L[i] > 0.0) {
      if (a[i] == 0.0 && b[i] == 0.0) return std::nullopt;
      lines.push_back({a[i], b[i], L[i]});
    }
  std::optional<std::pair<double, double>> best;
  auto consider = [&](double x, double y) {
    if (!feasible(x, y)) return;
    if (!best) {
      best = {x, y};
      return;
    }
    const double obj = x + y, cur = best->first + best->second;
    const double tie = 1e-12 * std::max(1.0, cur);
    if (obj < cur - tie || (std::abs(obj - cur) <= tie && y < best->second)) best = {x, y};
  };
  for (std::size_t i = 0; i < lines.size(); ++i)
    for (std::size_t j = i + 1; j < lines.size(); ++j) {
      const double det = lines[i].a * lines[j].b - lines[i].b * lines[j].a;
      if (std::abs(det) <= 1e-300) continue;
      const double x = (lines[i].L * lines[j].b - lines[i].b * lines[j].L) / det;
      const double y = (lines[i].a * lines[j].L - lines[i].L * lines[j].a) / det;
      consider(x, y);
    }
  return best;
}

CheckReport check_growth(const OperatorFamily& A, const SpacePtr& space,
                         const SamplingOptions& opt, const GrowthConstants& declared, bool fit,
                         std::mt19937_64& rng) {
  CheckReport rep;
  rep.name = "growth";
  rep.tolerance = opt.tolerance;
  rep.note = "left side is the ascent estimate of the discrete dual norm (a lower bound)";
  const auto fields = sample_fields(space, opt.field_samples, opt.scales, rng);
  const double p = A.p();
  std::vector<double> av, bv, Lv;
  for (double t : opt.t_samples) {
    const double c5 = declared.C5(t);
    {
      const DiscreteField zero = zero_field(space);
      const auto w = A.apply(zero, t);
      const double lhs = discrete_dual_norm(w, space, space->level(), p, rng);
      rep.observe(rel_margin(c5 - lhs, lhs, c5), fmt("t=%.17g zero field", t));
      av.push_back(0.0);
      bv.push_back(0.0);
      Lv.push_back(lhs - c5);
    }
    for (std::size_t i = 0; i < fields.size(); ++i) {
      const auto& x = fields[i];
      const auto w = A.apply(x, t);
      const double lhs = discrete_dual_norm(w, space, space->level(), p, rng, &x);
      const double a = std::pow(norm_V(x, p), p - 1.0);
      const double b = std::pow(norm_H(x), declared.q) * a;
      const double rhs = declared.c3 * a + declared.c4 * b + c5;
      rep.observe(rel_margin(rhs - lhs, lhs, rhs),
                  fmt("t=%.17g sample=%zu |x|_H=%.17g", t, i, norm_H(x)));
      av.push_back(a);
      bv.push_back(b);
      Lv.push_back(lhs - c5);
    }
  }
  if (fit) {
    // the zero-field rows only constrain C5
    for (std::size_t i = 0; i < Lv.size(); ++i)
      if (av[i] == 0.0 && bv[i] == 0.0) Lv[i] = std::min(Lv[i], 0.0);
    if (auto sol = fit_growth_lp(av, bv, Lv)) {
      rep.fitted_constants["c3"] = sol->first + 0.0;
      rep.fitted_constants["c4"] = sol->second + 0.0;
    }
  }
  rep.finish();
  return rep;
}

CheckReport check_monotone(const OperatorPart& B, const SpacePtr& space, std::size_t pairs,
                           double tolerance, std::mt19937_64& rng) {
  CheckReport rep;
  rep.name = "monotone-" + B.name();
  rep.tolerance = tolerance;
  const std::vector<double> scales{1e-2, 1e-1, 1.0, 1e1, 1e2};
  for (std::size_t i = 0; i < pairs; ++i) {
    const double lam = scales[i % scales.size()];
    const auto u = lam * unit_direction(space, rng);
    const auto v = partner(u, lam, i, space, rng);
    const auto bu = part_apply(B, u, 0.0), bv = part_apply(B, v, 0.0);
    const auto d = u - v;
    const double x = simd::dot(bu, d.coeffs), y = simd::dot(bv, d.coeffs);
    rep.observe(rel_margin(x - y, x, y), fmt("pair=%zu scale=%.17g", i, lam));
  }
  rep.finish();
  return rep;
}

CheckReport check_monotone(const OperatorFamily& A, const SpacePtr& space, std::size_t pairs,
                           double tolerance, std::mt19937_64& rng) {
  CheckReport rep;
  rep.name = "monotone";
  rep.tolerance = tolerance;
  const std::vector<double> scales{1e-2, 1e-1, 1.0, 1e1, 1e2};
  for (std::size_t i = 0; i < pairs; ++i) {
    const double lam = scales[i % scales.size()];
    const auto u = lam * unit_direction(space, rng);
    const auto v = partner(u, lam, i, space, rng);
    const auto bu = A.apply(u, 0.0), bv = A.apply(v, 0.0);
    const auto d = u - v;
    const double x = simd::dot(bu, d.coeffs), y = simd::dot(bv, d.coeffs);
    rep.observe(rel_margin(x - y, x, y), fmt("pair=%zu scale=%.17g", i, lam));
  }
  rep.finish();
  return rep;
}

// ---------------------------------------------------------- Nemytskii

std::vector<CheckReport> certify_g(const NemytskiiSpec& g, const Rational& p, int d, double T) {
  if (p <= 1) throw ConfigError("certify_g needs p > 1");
  if (d < 1) throw ConfigError("certify_g needs d >= 1");
  std::vector<CheckReport> out;
  const double inf = std::numeric_limits<double>::infinity();

  CheckReport g1;
  g1.name = "g1-continuity";
  g1.tolerance = 0.0;
  if (g.has_power() && g.r == 1 && g.a != 0.0) {
    g1.observe(-std::abs(g.a), "a|s|^{r-2}s with r = 1 jumps by 2a at s = 0");
  } else {
    g1.observe(0.0, "built-in terms are continuous in s, profile terms piecewise continuous in t");
  }
  g1.finish();
  out.push_back(g1);

  CheckReport g2a;
  g2a.name = "g2-admissibility";
  g2a.tolerance = 0.0;
  const Rational r = g.growth_exponent();
  const Rational r0 = p * (d + 2) / Rational(d);
  const Rational slack = std::min(Rational(r - 1), Rational(r0 - r));
  g2a.observe(to_double(slack), "r=" + to_string(r) + " r0=" + to_string(r0));
  g2a.note = "exact: 1 <= r <= p(d+2)/d";
  g2a.finish();
  g2a.passed = slack >= 0;
  out.push_back(g2a);

  // sampling grid on (t, x, s)
  std::vector<double> ts, ss, bs;
  for (int i = 0; i <= 8; ++i) ts.push_back(T * i / 8.0);
  for (int i = 0; i <= 10; ++i) bs.push_back(std::sin(std::numbers::pi * i / 10.0));
  ss.push_back(0.0);
  for (int e = -40; e <= 20; ++e) {
    ss.push_back(std::pow(10.0, e / 10.0));
    ss.push_back(-std::pow(10.0, e / 10.0));
  }
  const double rr = to_double(r);

  CheckReport g2g;
  g2g.name = "g2-growth";
  g2g.tolerance = 1e-12;
  g2g.fitted_constants["c6"] = g.c6();
  for (double t : ts)
    for (double b : bs)
      for (double s : ss) {
        const double val = std::abs(g.g_local(s) + g.c7(t) * b);
        const double bound = g.c6() * (1.0 + std::pow(std::abs(s), rr - 1.0)) + std::abs(g.c7(t));
        g2g.observe(rel_margin(bound - val, val, bound), fmt("t=%.17g b=%.17g s=%.17g", t, b, s));
      }
  g2g.finish();
  out.push_back(g2g);

  CheckReport g3;
  g3.name = "g3-sign";
  g3.tolerance = 1e-12;
  bool finite = true;
  for (double t : ts) {
    const double c8 = g.c8(t);
    if (c8 == inf) {
      finite = false;
      g3.observe(-1.0, fmt("t=%.17g: no finite C8 for these parameters", t));
      continue;
    }
    for (double b : bs)
      for (double s : ss) {
        const double val = (g.g_local(s) + g.c7(t) * b) * s;
        g3.observe(rel_margin(val + c8, val, c8), fmt("t=%.17g b=%.17g s=%.17g C8=%.17g", t, b, s, c8));
      }
  }
  if (finite) g3.fitted_constants["C8(0)"] = g.c8(0.0);
  g3.finish();
  out.push_back(g3);
  return out;
}

// ------------------------------------------------------------- audits

std::vector<CheckReport> audit_trajectory(const Trajectory& traj, const OperatorFamily& A,
                                          const ForcingSpec& f, double newton_tol,
                                          const AuditOptions& opt) {
  const double p = A.p();
  const double pp = p / (p - 1.0);
  const auto& C = A.constants();
  const auto& space = traj.space;
  const std::size_t K = traj.steps();

  CheckReport energy;
  energy.name = "energy-inequality";
  energy.tolerance = opt.energy_tolerance;
  CheckReport apriori;
  apriori.name = "a-priori-bound";
  apriori.tolerance = opt.bound_tolerance;
  CheckReport induced;
  induced.name = "induced-operator-bound";
  induced.tolerance = opt.bound_tolerance;
  CheckReport scheme;
  scheme.name = "scheme-residual";
  scheme.tolerance = 0.0;

  const double young = 2.0 * std::pow(0.5 * p * C.c1, -(pp - 1.0)) / pp;
  apriori.fitted_constants["young"] = young;
  if (p >= 2.0) {
    apriori.note = "forcing dual norm: |Omega|^{1/2-1/p} |f|_{H^-1} (upper bound)";
  } else {
    apriori.note = "forcing dual norm: ascent estimate (lower bound, p < 2)";
  }
  std::mt19937_64 rng(0x5eed);
  StepSolver replay(A, f, newton_tol, 1);

  const double h0 = mass_pairing(traj.fields[0], traj.fields[0]);
  double sum_v = 0.0, sum_f = 0.0, sum_c2 = 0.0;
  double sum_lhs = 0.0, sum_c5 = 0.0, Hmax = std::sqrt(h0);
  {
    const double lhs = h0, rhs = h0;
    apriori.observe(rel_margin(rhs - lhs, lhs, rhs), "step 0");
  }
  for (std::size_t k = 0; k < K; ++k) {
    const auto& u0 = traj.fields[k];
    const auto& u1 = traj.fields[k + 1];
    const double t = traj.times[k + 1];
    const double tau = t - traj.times[k];
    const auto Au = A.apply(u1, t);
    const auto F = assemble_rhs(*space, u1.level, f, t);
    const double a_pair = simd::dot(Au, u1.coeffs);
    const double f_pair = simd::dot(F, u1.coeffs);
    const double h1 = mass_pairing(u1, u1);
    const std::string where = fmt("step %zu t=%.17g", k + 1, t);

    const double e_lhs = 0.5 * h1 - 0.5 * mass_pairing(u0, u0) + tau * a_pair;
    energy.observe(tau * f_pair - e_lhs, where);

    const double nv = norm_V(u1, p);
    double fstar = 0.0;
    if (f.kind != ForcingSpec::Kind::zero)
      fstar = p >= 2.0 ? dual_norm_Hp_bound(F, *space, p) : discrete_dual_norm(F, space, u1.level, p, rng);
    sum_v += tau * std::pow(nv, p);
    sum_f += tau * std::pow(fstar, pp);
    sum_c2 += tau * C.C2(t);
    const double b_lhs = h1 + C.c1 * sum_v;
    const double b_rhs = h0 + young * sum_f + 2.0 * sum_c2;
    apriori.observe(rel_margin(b_rhs - b_lhs, b_lhs, b_rhs), where);

    double dual_lb = riesz_ratio(Au, space, u1.level, p);
    if (nv > 0.0) dual_lb = std::max(dual_lb, std::abs(a_pair) / nv);
    sum_lhs += tau * std::pow(dual_lb, pp);
    sum_c5 += tau * std::pow(C.C5(t), pp);
    Hmax = std::max(Hmax, std::sqrt(h1));

    const auto res = replay.residual(u1, u0, t, tau);
    const double rn = std::sqrt(simd::dot(res, res));
    scheme.observe(1.0 - rn / (opt.residual_factor * newton_tol), where + fmt(" residual=%.3g", rn));
  }
  if (K == 0) {
    energy.observe(0.0, "no steps");
    scheme.observe(0.0, "no steps");
  }
  {
    const double Kb = std::max(std::pow(sum_v, 1.0 / p), Hmax);
    const double lhs = std::pow(sum_lhs, 1.0 / pp);
    const double rhs = C.c3 * std::pow(Kb, p - 1.0) + C.c4 * std::pow(Kb, C.q + p - 1.0) +
                       std::pow(sum_c5, 1.0 / pp);
    induced.observe(rel_margin(rhs - lhs, lhs, rhs), fmt("K=%.17g lhs=%.17g rhs=%.17g", Kb, lhs, rhs));
    induced.note = "left side from the lower bounds <Au,u>/|u|_V and the Riesz ratio";
  }
  std::vector<CheckReport> out{energy, apriori, induced, scheme};
  for (auto& r : out) r.finish();
  return out;
}

}  // namespace galerkin
