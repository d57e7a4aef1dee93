#include "galerkin/operators.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "galerkin/errors.hpp"
#include "galerkin/simd/kernels.hpp"

namespace galerkin {

// ---------------------------------------------------------------- parts

void OperatorPart::check_space(const SpectralSpace&) const {}

void OperatorPart::add_flux_jacobian(const SpectralSpace& space, const NodalField& u, double t,
                                     PointJacobian& jac) const {
  const std::size_t nq = u.nodes;
  NodalField base(u.channels, nq), pert(u.channels, nq);
  add_flux(space, u, t, base);
  const auto outs = output_channels(space);
  NodalField shifted = u;
  std::vector<double> h(nq);
  for (std::size_t i : input_channels(space)) {
    auto col = shifted.channel(i);
    const auto orig = u.channel(i);
    for (std::size_t q = 0; q < nq; ++q) {
      h[q] = 1e-6 * (1.0 + std::abs(orig[q]));
      col[q] = orig[q] + h[q];
    }
    std::fill(pert.data.begin(), pert.data.end(), 0.0);
    add_flux(space, shifted, t, pert);
    for (std::size_t o : outs) {
      auto blk = jac.block(o, i);
      const auto fp = pert.channel(o), f0 = base.channel(o);
      for (std::size_t q = 0; q < nq; ++q) blk[q] += (fp[q] - f0[q]) / h[q];
    }
    std::copy(orig.begin(), orig.end(), col.begin());
  }
}

PLaplacePart::PLaplacePart(double p, double delta) : p_(p), delta_(delta) {
  if (!(p > 1.0) || !std::isfinite(p)) throw ConfigError("p-Laplace requires p in (1, inf)");
  if (!(delta >= 0.0) || !std::isfinite(delta)) throw ConfigError("delta must be finite and >= 0");
}

std::vector<std::size_t> PLaplacePart::input_channels(const SpectralSpace& space) const {
  std::vector<std::size_t> ch;
  for (std::size_t c = 0; c < space.grad_channels(); ++c) ch.push_back(space.value_channels() + c);
  return ch;
}

std::vector<std::size_t> PLaplacePart::output_channels(const SpectralSpace& space) const {
  return input_channels(space);
}

void PLaplacePart::add_flux(const SpectralSpace& space, const NodalField& u, double,
                            NodalField& flux) const {
  const std::size_t nv = space.value_channels(), ng = space.grad_channels();
  const double d2 = delta_ * delta_;
  const double half = 0.5 * (p_ - 2.0);
  for (std::size_t q = 0; q < u.nodes; ++q) {
    double g2 = 0.0;
    for (std::size_t c = 0; c < ng; ++c) g2 += u.at(nv + c, q) * u.at(nv + c, q);
    const double base = d2 + g2;
    if (base == 0.0) continue;  // 0^{(p-2)/2} * 0 := 0
    const double a = p_ == 2.0 ? 1.0 : std::pow(base, half);
    for (std::size_t c = 0; c < ng; ++c) flux.at(nv + c, q) += a * u.at(nv + c, q);
  }
}

void PLaplacePart::add_flux_jacobian(const SpectralSpace& space, const NodalField& u, double,
                                     PointJacobian& jac) const {
  const std::size_t nv = space.value_channels(), ng = space.grad_channels();
  const double d2 = delta_ * delta_;
  std::vector<std::span<double>> blocks(ng * ng);
  for (std::size_t i = 0; i < ng; ++i)
    for (std::size_t j = 0; j < ng; ++j) blocks[i * ng + j] = jac.block(nv + i, nv + j);
  for (std::size_t q = 0; q < u.nodes; ++q) {
    double g2 = 0.0;
    for (std::size_t c = 0; c < ng; ++c) g2 += u.at(nv + c, q) * u.at(nv + c, q);
    const double base = d2 + g2;
    if (base == 0.0) {
      if (p_ == 2.0)
        for (std::size_t i = 0; i < ng; ++i) blocks[i * ng + i][q] += 1.0;
      continue;
    }
    const double a = p_ == 2.0 ? 1.0 : std::pow(base, 0.5 * (p_ - 2.0));
    const double b = p_ == 2.0 ? 0.0 : (p_ - 2.0) * a / base;
    for (std::size_t i = 0; i < ng; ++i) {
      const double gi = u.at(nv + i, q);
      for (std::size_t j = 0; j < ng; ++j) {
        const double gj = u.at(nv + j, q);
        blocks[i * ng + j][q] += (i == j ? a : 0.0) + b * gi * gj;
      }
    }
  }
}

// ----------------------------------------------------------- nemytskii

std::string to_string(NemytskiiSpec::Kind kind) {
  switch (kind) {
    case NemytskiiSpec::Kind::power:
      return "power";
    case NemytskiiSpec::Kind::saturating:
      return "saturating";
    case NemytskiiSpec::Kind::sum:
      return "sum";
  }
  return "power";
}

bool NemytskiiSpec::operator==(const NemytskiiSpec& o) const {
  return kind == o.kind && a == o.a && r == o.r && c == o.c && c7 == o.c7;
}

double NemytskiiSpec::g_local(double s) const {
  double g = 0.0;
  if (has_power() && s != 0.0) {
    const double rr = to_double(r);
    g += a * std::copysign(std::pow(std::abs(s), rr - 1.0), s);
  }
  if (has_saturating()) g += c * s / (1.0 + s * s);
  return g;
}

double NemytskiiSpec::dg_local(double s) const {
  double d = 0.0;
  if (has_power()) {
    const double rr = to_double(r);
    if (s != 0.0)
      d += a * (rr - 1.0) * std::pow(std::abs(s), rr - 2.0);
    else if (rr == 2.0)
      d += a;
  }
  if (has_saturating()) {
    const double den = 1.0 + s * s;
    d += c * (1.0 - s * s) / (den * den);
  }
  return d;
}

double NemytskiiSpec::c6() const {
  double v = 0.0;
  if (has_power()) v += std::abs(a);
  if (has_saturating()) v += 0.5 * std::abs(c);
  return std::max(v, std::numeric_limits<double>::min());
}

double NemytskiiSpec::c8(double t) const {
  double bound = has_saturating() ? std::abs(c) : 0.0;
  if (has_power() && a < 0.0) return std::numeric_limits<double>::infinity();
  const double beta = std::abs(c7(t));
  if (beta == 0.0) return bound;
  if (!has_power() || a == 0.0) return std::numeric_limits<double>::infinity();
  const double rr = to_double(r);
  if (rr <= 1.0) return a >= beta ? bound : std::numeric_limits<double>::infinity();
  // min_s a|s|^r - beta|s| = -beta (r-1)/r (beta/(a r))^{1/(r-1)}
  const double smin = std::pow(beta / (a * rr), 1.0 / (rr - 1.0));
  return bound + beta * (rr - 1.0) / rr * smin;
}

NemytskiiPart::NemytskiiPart(NemytskiiSpec spec) : spec_(std::move(spec)) {
  if (spec_.has_power() && spec_.r < 1) throw ConfigError("Nemytskii exponent r must be >= 1");
  if (!std::isfinite(spec_.a) || !std::isfinite(spec_.c))
    throw ConfigError("Nemytskii coefficients must be finite");
}

void NemytskiiPart::check_space(const SpectralSpace& space) const {
  if (space.kind() != SpaceKind::dirichlet_sine)
    throw KindError("Nemytskii term is defined for scalar dirichlet-sine spaces only");
}

std::vector<std::size_t> NemytskiiPart::input_channels(const SpectralSpace&) const { return {0}; }
std::vector<std::size_t> NemytskiiPart::output_channels(const SpectralSpace&) const { return {0}; }

void NemytskiiPart::add_flux(const SpectralSpace& space, const NodalField& u, double t,
                             NodalField& flux) const {
  auto out = flux.channel(0);
  const auto s = u.channel(0);
  for (std::size_t q = 0; q < u.nodes; ++q) out[q] += spec_.g_local(s[q]);
  const double amp = spec_.c7(t);
  if (amp != 0.0) {
    const NodalField b = shape_values(space, "bump");
    simd::axpy(amp, b.channel(0), out);
  }
}

void NemytskiiPart::add_flux_jacobian(const SpectralSpace& space, const NodalField& u, double t,
                                      PointJacobian& jac) const {
  if (!has_analytic_jacobian()) {
    OperatorPart::add_flux_jacobian(space, u, t, jac);
    return;
  }
  auto blk = jac.block(0, 0);
  const auto s = u.channel(0);
  for (std::size_t q = 0; q < u.nodes; ++q) blk[q] += spec_.dg_local(s[q]);
}

// ---------------------------------------------------------- convection

void ConvectionPart::check_space(const SpectralSpace& space) const {
  if (space.kind() != SpaceKind::torus_divfree)
    throw KindError("convection requires a torus-divfree space");
}

std::vector<std::size_t> ConvectionPart::input_channels(const SpectralSpace&) const {
  return {0, 1};
}

std::vector<std::size_t> ConvectionPart::output_channels(const SpectralSpace&) const {
  return {2, 3, 4, 5};
}

void ConvectionPart::add_flux(const SpectralSpace& space, const NodalField& u, double,
                              NodalField& flux) const {
  check_space(space);
  // <B2 u, v> = -int u_i u_j d_j v_i ; gradient channel of d_j v_i is 2 + 2 i + j
  for (std::size_t q = 0; q < u.nodes; ++q) {
    const double u1 = u.at(0, q), u2 = u.at(1, q);
    flux.at(2, q) -= u1 * u1;
    flux.at(3, q) -= u1 * u2;
    flux.at(4, q) -= u2 * u1;
    flux.at(5, q) -= u2 * u2;
  }
}

// -------------------------------------------------------------- family

OperatorFamily::OperatorFamily(Rational p, double delta, std::vector<PartPtr> parts,
                               DeclaredConstants constants)
    : p_exact_(std::move(p)),
      p_(to_double(p_exact_)),
      delta_(delta),
      parts_(std::move(parts)),
      constants_(std::move(constants)) {
  if (!(p_ > 1.0) || !std::isfinite(p_)) throw ConfigError("p must lie in (1, inf)");
  if (parts_.empty()) throw ConfigError("operator family needs at least one part");
  if (!(constants_.c1 > 0.0)) throw ConfigError("declared c1 must be > 0");
  if (!(constants_.c3 > 0.0)) throw ConfigError("declared c3 must be > 0");
  if (!(constants_.c4 >= 0.0)) throw ConfigError("declared c4 must be >= 0");
  if (!(constants_.q >= 0.0) || !std::isfinite(constants_.q))
    throw ConfigError("declared q must be finite and >= 0");
}

const OperatorPart* OperatorFamily::find(PartKind kind) const {
  for (const auto& part : parts_)
    if (part->kind() == kind) return part.get();
  return nullptr;
}

void OperatorFamily::check_space(const SpectralSpace& space) const {
  for (const auto& part : parts_) part->check_space(space);
}

std::vector<double> OperatorFamily::apply(const DiscreteField& u, double t) const {
  return apply(u, t, u.level);
}

std::vector<double> OperatorFamily::apply(const DiscreteField& u, double t, int level) const {
  const auto& space = *u.space;
  check_space(space);
  const NodalField nodal = eval_on_quad(u);
  NodalField flux(space.channels(), space.nodes());
  for (const auto& part : parts_) part->add_flux(space, nodal, t, flux);
  return pair_with_basis(space, level, flux);
}

std::vector<double> OperatorFamily::jacobian(const DiscreteField& u, double t) const {
  const auto& space = *u.space;
  check_space(space);
  const std::size_t n = u.size(), nq = space.nodes(), nc = space.channels();
  const NodalField nodal = eval_on_quad(u);
  PointJacobian pj(nc, nq);
  for (const auto& part : parts_) part->add_flux_jacobian(space, nodal, t, pj);

  const auto& kern = simd::active_kernels();
  const auto w = space.weights();
  std::vector<double> jac(n * n, 0.0);
  std::vector<double> y(n * nq);
  std::vector<double> scaled(nq);
  for (std::size_t o = 0; o < nc; ++o) {
    bool any = false;
    std::fill(y.begin(), y.end(), 0.0);
    for (std::size_t i = 0; i < nc; ++i) {
      if (!pj.is_active(o, i)) continue;
      const auto blk = pj.block(o, i);
      for (std::size_t q = 0; q < nq; ++q) scaled[q] = w[q] * blk[q];
      any = true;
      for (std::size_t l = 0; l < n; ++l)
        kern.hadamard_acc(scaled.data(), space.table(i, l).data(), y.data() + l * nq, nq);
    }
    if (any) kern.gemm_nt(space.table_block(o), y.data(), jac.data(), n, n, nq);
  }
  return jac;
}

std::vector<double> p_laplace_apply(const DiscreteField& u, double p, double delta) {
  const auto& space = *u.space;
  PLaplacePart part(p, delta);
  const NodalField nodal = eval_on_quad(u);
  NodalField flux(space.channels(), space.nodes());
  part.add_flux(space, nodal, 0.0, flux);
  return pair_with_basis(space, u.level, flux);
}

std::vector<double> nemytskii_apply(const DiscreteField& u, const NemytskiiSpec& spec, double t) {
  const auto& space = *u.space;
  NemytskiiPart part(spec);
  part.check_space(space);
  const NodalField nodal = eval_on_quad(u);
  NodalField flux(space.channels(), space.nodes());
  part.add_flux(space, nodal, t, flux);
  return pair_with_basis(space, u.level, flux);
}

std::vector<double> convection_apply(const DiscreteField& u) {
  const auto& space = *u.space;
  ConvectionPart part;
  part.check_space(space);
  const NodalField nodal = eval_on_quad(u);
  NodalField flux(space.channels(), space.nodes());
  part.add_flux(space, nodal, 0.0, flux);
  return pair_with_basis(space, u.level, flux);
}

std::vector<double> family_apply(const OperatorFamily& family, double t, const DiscreteField& u) {
  return family.apply(u, t);
}

// ------------------------------------------------------------- forcing

std::string to_string(ForcingSpec::Kind kind) {
  switch (kind) {
    case ForcingSpec::Kind::zero:
      return "zero";
    case ForcingSpec::Kind::separable:
      return "separable";
    case ForcingSpec::Kind::mode:
      return "mode";
  }
  return "zero";
}

NodalField shape_values(const SpectralSpace& space, const std::string& shape) {
  NodalField out(space.channels(), space.nodes());
  if (shape == "bump") {
    if (space.kind() != SpaceKind::dirichlet_sine)
      throw KindError("shape 'bump' is defined on dirichlet-sine spaces");
    for (std::size_t q = 0; q < space.nodes(); ++q) {
      double v = 1.0;
      for (int a = 0; a < space.dim(); ++a) v *= std::sin(std::numbers::pi * space.coords(a)[q]);
      out.at(0, q) = v;
    }
  } else if (shape == "taylor-green") {
    if (space.kind() != SpaceKind::torus_divfree)
      throw KindError("shape 'taylor-green' is defined on torus-divfree spaces");
    for (std::size_t q = 0; q < space.nodes(); ++q) {
      const double x = space.coords(0)[q], y = space.coords(1)[q];
      out.at(0, q) = std::sin(x) * std::cos(y);
      out.at(1, q) = -std::cos(x) * std::sin(y);
    }
  } else {
    throw ConfigError("unknown shape '" + shape + "'");
  }
  return out;
}

std::vector<double> assemble_rhs(const SpectralSpace& space, int level, const ForcingSpec& f,
                                 double t) {
  std::vector<double> out(space.size(level), 0.0);
  switch (f.kind) {
    case ForcingSpec::Kind::zero:
      return out;
    case ForcingSpec::Kind::mode:
      if (f.mode < 1) throw ConfigError("forcing mode index is 1-based");
      if (f.mode <= out.size()) out[f.mode - 1] = f.time(t);
      return out;
    case ForcingSpec::Kind::separable: {
      const double amp = f.time(t);
      if (amp == 0.0) return out;
      NodalField b = shape_values(space, f.shape);
      for (double& v : b.data) v *= amp;
      return pair_with_basis(space, level, b);
    }
  }
  return out;
}

}  // namespace galerkin
