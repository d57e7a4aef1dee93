#include "galerkin/spaces.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "galerkin/errors.hpp"
#include "galerkin/simd/kernels.hpp"

namespace galerkin {

namespace {
constexpr double kPi = std::numbers::pi;
constexpr double kSqrt2 = std::numbers::sqrt2;

void require_finite(const DiscreteField& u) {
  for (double c : u.coeffs)
    if (!std::isfinite(c)) throw ConfigError("field has non-finite coefficient");
}

void require_shape(const DiscreteField& u) {
  if (!u.space) throw KindError("field has no space");
  if (u.level < 1 || u.level > u.space->level()) throw LevelError("field level outside space");
  if (u.coeffs.size() != u.space->size(u.level))
    throw LevelError("coefficient count does not match level");
}
}  // namespace

std::string to_string(SpaceKind kind) {
  return kind == SpaceKind::dirichlet_sine ? "dirichlet-sine" : "torus-divfree";
}

SpaceKind space_kind_from_string(const std::string& name) {
  if (name == "dirichlet-sine") return SpaceKind::dirichlet_sine;
  if (name == "torus-divfree") return SpaceKind::torus_divfree;
  throw ConfigError("unknown space kind '" + name + "'");
}

SpacePtr SpectralSpace::make(SpaceKind kind, int dim, int level, double smoothness,
                             int quad_order) {
  if (kind == SpaceKind::dirichlet_sine && dim != 1 && dim != 2)
    throw ConfigError("dirichlet-sine supports d in {1, 2}, got d = " + std::to_string(dim));
  if (kind == SpaceKind::torus_divfree && dim != 2)
    throw ConfigError("torus-divfree supports d = 2 only, got d = " + std::to_string(dim));
  if (level < 1) throw ConfigError("level must be >= 1");
  if (!(smoothness >= 0.0) || !std::isfinite(smoothness))
    throw ConfigError("smoothness index s must be finite and >= 0");
  if (quad_order == 0)
    quad_order = kind == SpaceKind::dirichlet_sine ? 4 * level + 4 : 3 * level + 2;
  if (quad_order < 2 * level + 2)
    throw ConfigError("quad_order must be >= 2*level + 2 (got " + std::to_string(quad_order) +
                      " for level " + std::to_string(level) + ")");
  return std::make_shared<const SpectralSpace>(Token{}, kind, dim, level, smoothness,
                                               quad_order);
}

SpacePtr make_space(SpaceKind kind, int dim, int level, double smoothness, int quad_order) {
  return SpectralSpace::make(kind, dim, level, smoothness, quad_order);
}

SpectralSpace::SpectralSpace(Token, SpaceKind kind, int dim, int level, double smoothness,
                             int quad_order)
    : kind_(kind), dim_(dim), level_(level), smoothness_(smoothness), quad_order_(quad_order) {
  if (kind_ == SpaceKind::torus_divfree) {
    value_channels_ = 2;
    grad_channels_ = 4;
    measure_ = 4.0 * kPi * kPi;
  } else {
    value_channels_ = 1;
    grad_channels_ = static_cast<std::size_t>(dim_);
    measure_ = 1.0;
  }
  build_modes();
  build_quadrature();
  build_tables();
}

void SpectralSpace::build_modes() {
  level_sizes_.assign(1, 0);
  for (int m = 1; m <= level_; ++m) {
    if (kind_ == SpaceKind::dirichlet_sine && dim_ == 1) {
      modes_.push_back({{m, 0}, 0, m, kPi * kPi * m * m});
    } else if (kind_ == SpaceKind::dirichlet_sine) {
      for (int j = 1; j <= m; ++j) modes_.push_back({{m, j}, 0, m, kPi * kPi * (m * m + j * j)});
      for (int i = 1; i < m; ++i) modes_.push_back({{i, m}, 0, m, kPi * kPi * (i * i + m * m)});
    } else {
      for (int k1 = 0; k1 <= m; ++k1) {
        for (int k2 = -m; k2 <= m; ++k2) {
          if (std::max(k1, std::abs(k2)) != m) continue;
          if (k1 == 0 && k2 <= 0) continue;
          const double w = static_cast<double>(k1 * k1 + k2 * k2);
          modes_.push_back({{k1, k2}, 0, m, w});
          modes_.push_back({{k1, k2}, 1, m, w});
        }
      }
    }
    level_sizes_.push_back(modes_.size());
  }
}

void SpectralSpace::build_quadrature() {
  const int n = quad_order_;
  std::vector<double> x1(static_cast<std::size_t>(n));
  double w1 = 0.0;
  if (kind_ == SpaceKind::dirichlet_sine) {
    for (int i = 0; i < n; ++i) x1[static_cast<std::size_t>(i)] = (i + 0.5) / n;
    w1 = 1.0 / n;
  } else {
    for (int i = 0; i < n; ++i) x1[static_cast<std::size_t>(i)] = 2.0 * kPi * i / n;
    w1 = 2.0 * kPi / n;
  }
  if (dim_ == 1) {
    coords_ = {x1};
    weights_.assign(x1.size(), w1);
    return;
  }
  const std::size_t nq = x1.size() * x1.size();
  coords_.assign(2, std::vector<double>(nq));
  weights_.assign(nq, w1 * w1);
  for (std::size_t i = 0; i < x1.size(); ++i)
    for (std::size_t j = 0; j < x1.size(); ++j) {
      coords_[0][i * x1.size() + j] = x1[i];
      coords_[1][i * x1.size() + j] = x1[j];
    }
}

std::vector<double> SpectralSpace::eval_basis_at(std::size_t i, std::span<const double> pt) const {
  const Mode& md = modes_.at(i);
  std::vector<double> out(channels(), 0.0);
  if (kind_ == SpaceKind::dirichlet_sine && dim_ == 1) {
    const double a = md.k[0] * kPi;
    out[0] = kSqrt2 * std::sin(a * pt[0]);
    out[1] = kSqrt2 * a * std::cos(a * pt[0]);
  } else if (kind_ == SpaceKind::dirichlet_sine) {
    const double a = md.k[0] * kPi, b = md.k[1] * kPi;
    const double sx = std::sin(a * pt[0]), cx = std::cos(a * pt[0]);
    const double sy = std::sin(b * pt[1]), cy = std::cos(b * pt[1]);
    out[0] = 2.0 * sx * sy;
    out[1] = 2.0 * a * cx * sy;
    out[2] = 2.0 * b * sx * cy;
  } else {
    const double k1 = md.k[0], k2 = md.k[1];
    const double norm = std::sqrt(k1 * k1 + k2 * k2);
    const double e[2] = {-k2 / norm, k1 / norm};
    const double kv[2] = {k1, k2};
    const double c = 1.0 / (kSqrt2 * kPi);
    const double theta = k1 * pt[0] + k2 * pt[1];
    const double val = md.parity == 0 ? std::cos(theta) : std::sin(theta);
    const double dval = md.parity == 0 ? -std::sin(theta) : std::cos(theta);
    for (int comp = 0; comp < 2; ++comp) {
      out[static_cast<std::size_t>(comp)] = c * val * e[comp];
      for (int j = 0; j < 2; ++j)
        out[static_cast<std::size_t>(2 + comp * 2 + j)] = c * dval * kv[j] * e[comp];
    }
  }
  return out;
}

void SpectralSpace::build_tables() {
  const std::size_t nb = size(), nq = nodes(), nc = channels();
  tables_.assign(nc * nb * nq, 0.0);
  std::vector<double> pt(static_cast<std::size_t>(dim_));
  for (std::size_t i = 0; i < nb; ++i) {
    for (std::size_t q = 0; q < nq; ++q) {
      for (int a = 0; a < dim_; ++a) pt[static_cast<std::size_t>(a)] = coords_[static_cast<std::size_t>(a)][q];
      const auto vals = eval_basis_at(i, pt);
      for (std::size_t c = 0; c < nc; ++c) tables_[(c * nb + i) * nq + q] = vals[c];
    }
  }
}

std::size_t SpectralSpace::size(int m) const {
  if (m < 0 || m > level_) throw LevelError("level " + std::to_string(m) + " outside space");
  return level_sizes_[static_cast<std::size_t>(m)];
}

DiscreteField zero_field(const SpacePtr& space, int level) {
  return DiscreteField{space, level, std::vector<double>(space->size(level), 0.0)};
}

DiscreteField zero_field(const SpacePtr& space) { return zero_field(space, space->level()); }

DiscreteField basis_field(const SpacePtr& space, std::size_t index) {
  auto f = zero_field(space);
  f.coeffs.at(index) = 1.0;
  return f;
}

DiscreteField make_field(const SpacePtr& space, std::vector<double> coeffs) {
  // smallest level holding all coefficients, padded to that level
  int level = 1;
  while (level < space->level() && space->size(level) < coeffs.size()) ++level;
  if (coeffs.size() > space->size(level)) throw LevelError("too many coefficients for space");
  coeffs.resize(space->size(level), 0.0);
  DiscreteField f{space, level, std::move(coeffs)};
  require_finite(f);
  return f;
}

DiscreteField project(const DiscreteField& field, int target_level) {
  require_shape(field);
  if (target_level > field.level)
    throw LevelError("cannot project level " + std::to_string(field.level) + " up to " +
                     std::to_string(target_level));
  if (target_level < 1) throw LevelError("target level must be >= 1");
  DiscreteField out{field.space, target_level, {}};
  const std::size_t n = field.space->size(target_level);
  out.coeffs.assign(field.coeffs.begin(), field.coeffs.begin() + static_cast<std::ptrdiff_t>(n));
  return out;
}

DiscreteField embed(const DiscreteField& field, const SpacePtr& target, int target_level) {
  require_shape(field);
  if (!field.space->same_family(*target)) throw KindError("embed across different space families");
  if (target_level < field.level || target_level > target->level())
    throw LevelError("embed target level must be in [field level, space level]");
  DiscreteField out = zero_field(target, target_level);
  std::copy(field.coeffs.begin(), field.coeffs.end(), out.coeffs.begin());
  return out;
}

DiscreteField embed(const DiscreteField& field, const SpacePtr& target) {
  return embed(field, target, target->level());
}

double mass_pairing(const DiscreteField& u, const DiscreteField& v) {
  require_shape(u);
  require_shape(v);
  if (!u.space->same_family(*v.space)) throw KindError("mass pairing across different spaces");
  const std::size_t n = std::min(u.size(), v.size());
  return simd::dot({u.coeffs.data(), n}, {v.coeffs.data(), n});
}

double mass_pairing_quadrature(const DiscreteField& u, const DiscreteField& v) {
  if (u.space != v.space) throw KindError("quadrature pairing needs a shared space");
  const NodalField a = eval_on_quad(u), b = eval_on_quad(v);
  const auto w = u.space->weights();
  double s = 0.0;
  for (std::size_t c = 0; c < u.space->value_channels(); ++c)
    for (std::size_t q = 0; q < a.nodes; ++q) s += w[q] * a.at(c, q) * b.at(c, q);
  return s;
}

double norm_H(const DiscreteField& u) {
  require_shape(u);
  return std::sqrt(simd::dot(u.coeffs, u.coeffs));
}

double norm_V(const DiscreteField& u, double p) {
  if (!(p > 1.0) || !std::isfinite(p)) throw ConfigError("norm_V requires p in (1, inf)");
  const NodalField nf = eval_on_quad(u);
  const auto& sp = *u.space;
  const auto w = sp.weights();
  const std::size_t nv = sp.value_channels(), ng = sp.grad_channels();
  double s = 0.0;
  for (std::size_t q = 0; q < nf.nodes; ++q) {
    double g2 = 0.0;
    for (std::size_t c = 0; c < ng; ++c) g2 += nf.at(nv + c, q) * nf.at(nv + c, q);
    if (g2 > 0.0) s += w[q] * std::pow(g2, 0.5 * p);
  }
  return std::pow(s, 1.0 / p);
}

double norm_Hs(const DiscreteField& u, double s) {
  require_shape(u);
  double acc = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i)
    acc += std::pow(u.space->sobolev_weight(i), s) * u.coeffs[i] * u.coeffs[i];
  return std::sqrt(acc);
}

double dual_norm_Zstar(std::span<const double> pairings, const SpectralSpace& space, double s) {
  if (pairings.size() > space.size()) throw LevelError("functional longer than the space basis");
  double acc = 0.0;
  for (std::size_t i = 0; i < pairings.size(); ++i)
    acc += std::pow(space.sobolev_weight(i), -s) * pairings[i] * pairings[i];
  return std::sqrt(acc);
}

void eval_on_quad(const DiscreteField& u, NodalField& out) {
  require_shape(u);
  const auto& sp = *u.space;
  const std::size_t nq = sp.nodes(), nc = sp.channels();
  if (out.channels != nc || out.nodes != nq) out = NodalField(nc, nq);
  std::fill(out.data.begin(), out.data.end(), 0.0);
  for (std::size_t c = 0; c < nc; ++c) {
    auto dst = out.channel(c);
    for (std::size_t i = 0; i < u.size(); ++i)
      if (u.coeffs[i] != 0.0) simd::axpy(u.coeffs[i], sp.table(c, i), dst);
  }
}

NodalField eval_on_quad(const DiscreteField& u) {
  NodalField out;
  eval_on_quad(u, out);
  return out;
}

std::vector<double> eval_at(const DiscreteField& u, std::span<const double> point) {
  require_shape(u);
  std::vector<double> out(u.space->channels(), 0.0);
  for (std::size_t i = 0; i < u.size(); ++i) {
    if (u.coeffs[i] == 0.0) continue;
    const auto b = u.space->eval_basis_at(i, point);
    for (std::size_t c = 0; c < out.size(); ++c) out[c] += u.coeffs[i] * b[c];
  }
  return out;
}

std::vector<double> pair_with_basis(const SpectralSpace& space, int level, const NodalField& flux) {
  const std::size_t nb = space.size(level), nq = space.nodes();
  if (flux.nodes != nq || flux.channels != space.channels())
    throw KindError("flux layout does not match space");
  const auto w = space.weights();
  std::vector<double> weighted(nq);
  std::vector<double> out(nb, 0.0);
  for (std::size_t c = 0; c < flux.channels; ++c) {
    const auto f = flux.channel(c);
    bool any = false;
    for (std::size_t q = 0; q < nq; ++q) {
      weighted[q] = w[q] * f[q];
      any = any || weighted[q] != 0.0;
    }
    if (!any) continue;
    for (std::size_t i = 0; i < nb; ++i) out[i] += simd::dot(space.table(c, i), weighted);
  }
  return out;
}

namespace {
void require_compatible(const DiscreteField& a, const DiscreteField& b) {
  if (a.space != b.space || a.level != b.level || a.size() != b.size())
    throw KindError("fields live in different spaces or levels");
}
}  // namespace

DiscreteField operator+(const DiscreteField& a, const DiscreteField& b) {
  require_compatible(a, b);
  DiscreteField out = a;
  for (std::size_t i = 0; i < out.size(); ++i) out.coeffs[i] += b.coeffs[i];
  return out;
}

DiscreteField operator-(const DiscreteField& a, const DiscreteField& b) {
  require_compatible(a, b);
  DiscreteField out = a;
  for (std::size_t i = 0; i < out.size(); ++i) out.coeffs[i] -= b.coeffs[i];
  return out;
}

DiscreteField operator*(double s, const DiscreteField& a) {
  DiscreteField out = a;
  for (double& c : out.coeffs) c *= s;
  return out;
}

}  // namespace galerkin
