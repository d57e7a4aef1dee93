#pragma once
// Spectral trial spaces V_n with truncation projections.
//
// Two families are supported:
//   dirichlet-sine : tensor sine basis on (0,1)^d, d in {1,2}, midpoint rule;
//   torus-divfree  : real solenoidal Fourier fields on [0,2pi)^2, trapezoid rule.
// Both bases are L2-orthonormal and ordered shell by shell, so the level-n
// basis is a prefix of the level-(n+1) basis and P_n is coefficient
// truncation (self-adjoint in H, a contraction in every H^s).

#include <array>
#include <cstddef>
#include <memory>
#include <span>
#include <string>
#include <vector>

namespace galerkin {

enum class SpaceKind { dirichlet_sine, torus_divfree };

std::string to_string(SpaceKind kind);
SpaceKind space_kind_from_string(const std::string& name);

/// One basis function: integer wavevector, cos/sin flavour (torus only) and
/// the squared physical wavenumber |k pi|^2 (sine) or |k|^2 (torus).
struct Mode {
  std::array<int, 2> k{0, 0};
  int parity = 0;  // torus: 0 -> cos(k.x), 1 -> sin(k.x)
  int shell = 1;   // max-norm of k; the level at which the mode enters
  double wavenumber_sq = 0.0;
};

/// Values and gradients of a field (or fluxes paired against them) at the
/// quadrature nodes. Channels are laid out values first, then gradient
/// components: scalar -> [u, du/dx (, du/dy)]; torus -> [u1, u2, d1u1, d2u1,
/// d1u2, d2u2].
struct NodalField {
  std::size_t channels = 0;
  std::size_t nodes = 0;
  std::vector<double> data;

  NodalField() = default;
  NodalField(std::size_t channels_, std::size_t nodes_)
      : channels(channels_), nodes(nodes_), data(channels_ * nodes_, 0.0) {}

  std::span<double> channel(std::size_t c) { return {data.data() + c * nodes, nodes}; }
  std::span<const double> channel(std::size_t c) const { return {data.data() + c * nodes, nodes}; }
  double& at(std::size_t c, std::size_t q) { return data[c * nodes + q]; }
  double at(std::size_t c, std::size_t q) const { return data[c * nodes + q]; }
};

class SpectralSpace {
 public:
  /// quad_order = 0 selects the default (4n+4 sine, 3n+2 torus).
  static std::shared_ptr<const SpectralSpace> make(SpaceKind kind, int dim, int level,
                                                   double smoothness = 2.0, int quad_order = 0);

  SpaceKind kind() const noexcept { return kind_; }
  int dim() const noexcept { return dim_; }
  int level() const noexcept { return level_; }
  double smoothness() const noexcept { return smoothness_; }
  int quad_order() const noexcept { return quad_order_; }

  /// Number of basis functions of V_m, m <= level().
  std::size_t size(int m) const;
  std::size_t size() const noexcept { return modes_.size(); }
  const Mode& mode(std::size_t i) const { return modes_.at(i); }

  std::size_t value_channels() const noexcept { return value_channels_; }
  std::size_t grad_channels() const noexcept { return grad_channels_; }
  std::size_t channels() const noexcept { return value_channels_ + grad_channels_; }
  std::size_t nodes() const noexcept { return weights_.size(); }

  std::span<const double> weights() const noexcept { return weights_; }
  /// Coordinate `axis` of every quadrature node.
  std::span<const double> coords(int axis) const { return coords_.at(static_cast<std::size_t>(axis)); }

  /// Channel `c` of basis function `i` at all nodes.
  std::span<const double> table(std::size_t c, std::size_t i) const {
    return {tables_.data() + (c * size() + i) * nodes(), nodes()};
  }
  /// Channel `c` of the first `count` basis functions as a (count x nodes)
  /// row-major block.
  const double* table_block(std::size_t c) const { return tables_.data() + c * size() * nodes(); }

  /// Lebesgue measure of the domain (1 or 4 pi^2).
  double measure() const noexcept { return measure_; }

  /// omega_k = 1 + |wavenumber|^2, the H^1 weight base of mode i.
  double sobolev_weight(std::size_t i) const { return 1.0 + modes_.at(i).wavenumber_sq; }

  /// All channels of basis function i at an arbitrary point.
  std::vector<double> eval_basis_at(std::size_t i, std::span<const double> point) const;

  bool same_family(const SpectralSpace& other) const noexcept {
    return kind_ == other.kind_ && dim_ == other.dim_;
  }

  // shared_ptr construction only
  struct Token {};
  SpectralSpace(Token, SpaceKind kind, int dim, int level, double smoothness, int quad_order);

 private:
  void build_modes();
  void build_quadrature();
  void build_tables();

  SpaceKind kind_;
  int dim_;
  int level_;
  double smoothness_;
  int quad_order_;
  std::size_t value_channels_ = 1;
  std::size_t grad_channels_ = 1;
  double measure_ = 1.0;
  std::vector<Mode> modes_;
  std::vector<std::size_t> level_sizes_;  // level_sizes_[m] = dim V_m
  std::vector<double> weights_;
  std::vector<std::vector<double>> coords_;
  std::vector<double> tables_;
};

using SpacePtr = std::shared_ptr<const SpectralSpace>;

/// Coefficients of a function in V_level of `space` (level <= space->level()).
struct DiscreteField {
  SpacePtr space;
  int level = 0;
  std::vector<double> coeffs;

  std::size_t size() const noexcept { return coeffs.size(); }
};

SpacePtr make_space(SpaceKind kind, int dim, int level, double smoothness = 2.0,
                    int quad_order = 0);

DiscreteField zero_field(const SpacePtr& space, int level);
DiscreteField zero_field(const SpacePtr& space);
/// Unit coefficient on basis function `index` (0-based).
DiscreteField basis_field(const SpacePtr& space, std::size_t index);
DiscreteField make_field(const SpacePtr& space, std::vector<double> coeffs);

/// Truncation P_m; throws LevelError if target_level > field.level.
DiscreteField project(const DiscreteField& field, int target_level);
/// Zero-padding V_m -> V_n of a (possibly different) space of the same family.
DiscreteField embed(const DiscreteField& field, const SpacePtr& target, int target_level);
DiscreteField embed(const DiscreteField& field, const SpacePtr& target);

/// (u, v)_H; exact in coefficients by orthonormality. Fields of different
/// levels pair over the common modes.
double mass_pairing(const DiscreteField& u, const DiscreteField& v);
/// (u, v)_H evaluated by quadrature (consistency checks).
double mass_pairing_quadrature(const DiscreteField& u, const DiscreteField& v);

double norm_H(const DiscreteField& u);
/// ||grad u||_{L^p} by quadrature.
double norm_V(const DiscreteField& u, double p);
/// (sum omega_k^s c_k^2)^{1/2}
double norm_Hs(const DiscreteField& u, double s);
/// Pointwise-in-time Z* = (H^s)* norm of a functional given by its pairings
/// against the orthonormal basis of `space`.
double dual_norm_Zstar(std::span<const double> pairings, const SpectralSpace& space, double s);

/// Exact basis summation at the quadrature nodes.
NodalField eval_on_quad(const DiscreteField& u);
void eval_on_quad(const DiscreteField& u, NodalField& out);
/// All channels of u at a point.
std::vector<double> eval_at(const DiscreteField& u, std::span<const double> point);

/// out_i = sum_q w_q sum_c flux_c(q) table_c(i, q), for i < size(level): the
/// pairings of a nodal flux against the basis of V_level.
std::vector<double> pair_with_basis(const SpectralSpace& space, int level, const NodalField& flux);

/// In-place linear combination helpers for fields on the same space/level.
DiscreteField operator+(const DiscreteField& a, const DiscreteField& b);
DiscreteField operator-(const DiscreteField& a, const DiscreteField& b);
DiscreteField operator*(double s, const DiscreteField& a);

}  // namespace galerkin
