#pragma once
// Concrete operator families A(t) = sum of parts:
//   p-Laplace with (p, delta) structure  <Bu,v> = int (delta^2+|Du|^2)^{(p-2)/2} Du:Dv
//   Nemytskii lower-order term           <B4(t)u,v> = int g(t,x,u) v
//   divergence-free convection           <B2u,v> = -int (u (x) u) : Dv
// Every part is a pointwise flux at the quadrature nodes followed by a
// pairing against the basis, which keeps all parts on the same quadrature.

#include <memory>
#include <span>
#include <string>
#include <vector>

#include "galerkin/profiles.hpp"
#include "galerkin/rational.hpp"
#include "galerkin/spaces.hpp"

namespace galerkin {

/// d flux_o / d input_i at every node; layout data[(o * channels + i) * nodes + q].
struct PointJacobian {
  std::size_t channels = 0;
  std::size_t nodes = 0;
  std::vector<double> data;
  std::vector<char> active;  // channels x channels

  PointJacobian(std::size_t channels_, std::size_t nodes_)
      : channels(channels_),
        nodes(nodes_),
        data(channels_ * channels_ * nodes_, 0.0),
        active(channels_ * channels_, 0) {}

  std::span<double> block(std::size_t o, std::size_t i) {
    active[o * channels + i] = 1;
    return {data.data() + (o * channels + i) * nodes, nodes};
  }
  std::span<const double> block(std::size_t o, std::size_t i) const {
    return {data.data() + (o * channels + i) * nodes, nodes};
  }
  bool is_active(std::size_t o, std::size_t i) const { return active[o * channels + i] != 0; }
};

enum class PartKind { p_laplace, nemytskii, convection };

class OperatorPart {
 public:
  virtual ~OperatorPart() = default;

  virtual PartKind kind() const = 0;
  virtual std::string name() const = 0;
  /// Throws KindError if the part cannot act on this space.
  virtual void check_space(const SpectralSpace& space) const;

  /// flux += part flux of the field whose nodal values are `u`.
  virtual void add_flux(const SpectralSpace& space, const NodalField& u, double t,
                        NodalField& flux) const = 0;

  virtual std::vector<std::size_t> input_channels(const SpectralSpace& space) const = 0;
  virtual std::vector<std::size_t> output_channels(const SpectralSpace& space) const = 0;

  virtual bool has_analytic_jacobian() const { return false; }
  /// jac += pointwise derivative of the flux. The default differences the
  /// flux in each input channel with h = 1e-6 (1 + |input|).
  virtual void add_flux_jacobian(const SpectralSpace& space, const NodalField& u, double t,
                                 PointJacobian& jac) const;
};

using PartPtr = std::shared_ptr<const OperatorPart>;

class PLaplacePart final : public OperatorPart {
 public:
  PLaplacePart(double p, double delta);

  PartKind kind() const override { return PartKind::p_laplace; }
  std::string name() const override { return "p-laplace"; }
  void add_flux(const SpectralSpace& space, const NodalField& u, double t,
                NodalField& flux) const override;
  std::vector<std::size_t> input_channels(const SpectralSpace& space) const override;
  std::vector<std::size_t> output_channels(const SpectralSpace& space) const override;
  bool has_analytic_jacobian() const override { return true; }
  void add_flux_jacobian(const SpectralSpace& space, const NodalField& u, double t,
                         PointJacobian& jac) const override;

  double p() const noexcept { return p_; }
  double delta() const noexcept { return delta_; }

 private:
  double p_;
  double delta_;
};

/// Built-in nonlinearities g(t, x, s); the registry is closed so that the
/// growth and sign conditions can be certified from the parameters.
struct NemytskiiSpec {
  enum class Kind { power, saturating, sum };

  Kind kind = Kind::power;
  double a = 0.0;             // power term a |s|^{r-2} s
  Rational r = 2;             // growth exponent of the power term
  double c = 0.0;             // saturating term c s / (1 + s^2)
  TimeProfile c7;             // additive term C7(t) b(x), b = sine bump, |b| <= 1

  bool has_power() const { return kind != Kind::saturating; }
  bool has_saturating() const { return kind != Kind::power; }
  /// Growth exponent entering the admissibility bound (1 for bounded g).
  Rational growth_exponent() const { return has_power() ? r : Rational(1); }

  /// g without the additive profile term.
  double g_local(double s) const;
  double dg_local(double s) const;
  /// c6 in |g| <= c6 (1 + |s|^{r-1}) + C7(t).
  double c6() const;
  /// C8(t) in g(t,x,s) s >= -C8(t), from Young's inequality on the profile
  /// term; +inf when no such bound exists.
  double c8(double t) const;

  bool operator==(const NemytskiiSpec&) const;
};

std::string to_string(NemytskiiSpec::Kind kind);

class NemytskiiPart final : public OperatorPart {
 public:
  explicit NemytskiiPart(NemytskiiSpec spec);

  PartKind kind() const override { return PartKind::nemytskii; }
  std::string name() const override { return "nemytskii"; }
  void check_space(const SpectralSpace& space) const override;
  void add_flux(const SpectralSpace& space, const NodalField& u, double t,
                NodalField& flux) const override;
  std::vector<std::size_t> input_channels(const SpectralSpace& space) const override;
  std::vector<std::size_t> output_channels(const SpectralSpace& space) const override;
  bool has_analytic_jacobian() const override { return spec_.kind == NemytskiiSpec::Kind::power; }
  void add_flux_jacobian(const SpectralSpace& space, const NodalField& u, double t,
                         PointJacobian& jac) const override;

  const NemytskiiSpec& spec() const noexcept { return spec_; }

 private:
  NemytskiiSpec spec_;
};

class ConvectionPart final : public OperatorPart {
 public:
  PartKind kind() const override { return PartKind::convection; }
  std::string name() const override { return "convection"; }
  void check_space(const SpectralSpace& space) const override;
  void add_flux(const SpectralSpace& space, const NodalField& u, double t,
                NodalField& flux) const override;
  std::vector<std::size_t> input_channels(const SpectralSpace& space) const override;
  std::vector<std::size_t> output_channels(const SpectralSpace& space) const override;
};

/// Coercivity and growth constants as declared by the user.
struct DeclaredConstants {
  double c1 = 1.0;
  TimeProfile C2;
  double c3 = 1.0;
  double c4 = 0.0;
  double q = 0.0;
  TimeProfile C5;

  bool operator==(const DeclaredConstants&) const = default;
};

class OperatorFamily {
 public:
  OperatorFamily(Rational p, double delta, std::vector<PartPtr> parts,
                 DeclaredConstants constants = {});

  double p() const noexcept { return p_; }
  const Rational& p_exact() const noexcept { return p_exact_; }
  double delta() const noexcept { return delta_; }
  const std::vector<PartPtr>& parts() const noexcept { return parts_; }
  const DeclaredConstants& constants() const noexcept { return constants_; }
  /// First part of the given kind, or nullptr.
  const OperatorPart* find(PartKind kind) const;

  void check_space(const SpectralSpace& space) const;

  /// <A(t)u, phi_k> for every basis function of u's level.
  std::vector<double> apply(const DiscreteField& u, double t) const;
  /// Pairings of A(t)u against the basis of `level` (>= u.level allowed).
  std::vector<double> apply(const DiscreteField& u, double t, int level) const;
  /// Dense row-major Jacobian d<A(t)u, phi_k>/dc_l at u's level.
  std::vector<double> jacobian(const DiscreteField& u, double t) const;

 private:
  Rational p_exact_;
  double p_;
  double delta_;
  std::vector<PartPtr> parts_;
  DeclaredConstants constants_;
};

std::vector<double> p_laplace_apply(const DiscreteField& u, double p, double delta);
std::vector<double> nemytskii_apply(const DiscreteField& u, const NemytskiiSpec& spec, double t);
std::vector<double> convection_apply(const DiscreteField& u);
std::vector<double> family_apply(const OperatorFamily& family, double t, const DiscreteField& u);

/// Right-hand side f(t) as a named space-time profile.
struct ForcingSpec {
  enum class Kind { zero, separable, mode };

  Kind kind = Kind::zero;
  TimeProfile time = TimeProfile::constant_of(1.0);
  std::string shape = "bump";  // separable: "bump" (sine) or "taylor-green" (torus)
  std::size_t mode = 1;        // mode forcing: 1-based basis index

  bool operator==(const ForcingSpec&) const = default;
};

std::string to_string(ForcingSpec::Kind kind);

/// <f(t), phi_k> for the basis of V_level.
std::vector<double> assemble_rhs(const SpectralSpace& space, int level, const ForcingSpec& f,
                                 double t);

/// Nodal values (value channels only) of a named shape on the space's grid.
NodalField shape_values(const SpectralSpace& space, const std::string& shape);

}  // namespace galerkin
