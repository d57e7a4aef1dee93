#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "galerkin/errors.hpp"
#include "galerkin/operators.hpp"
#include "test_support.hpp"

using namespace galerkin;
using galerkin::testing::random_field;
using galerkin::testing::rel_diff;

namespace {
constexpr double kPi = std::numbers::pi;

double pair(const std::vector<double>& dual, const DiscreteField& v) {
  double s = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) s += dual[i] * v.coeffs[i];
  return s;
}

NemytskiiSpec power(double a, Rational r) {
  NemytskiiSpec g;
  g.kind = NemytskiiSpec::Kind::power;
  g.a = a;
  g.r = std::move(r);
  return g;
}

DiscreteField taylor_green(const SpacePtr& sp) {
  return DiscreteField{sp, sp->level(), pair_with_basis(*sp, sp->level(), shape_values(*sp, "taylor-green"))};
}
}  // namespace

TEST_CASE("p-Laplace pairings") {
  auto sp = make_space(SpaceKind::dirichlet_sine, 1, 4);
  const auto b = p_laplace_apply(basis_field(sp, 0), 2.0, 0.0);
  CHECK(b[0] == doctest::Approx(kPi * kPi).epsilon(1e-14));
  for (std::size_t k = 1; k < b.size(); ++k) CHECK(std::abs(b[k]) < 1e-12);

  for (double p : {2.5, 3.0, 4.0})
    for (double v : p_laplace_apply(zero_field(sp), p, 0.0)) CHECK(v == 0.0);

  // int pi^3 |cos pi x|^3 = 4 pi^2 / 3, midpoint rule with 1001 nodes
  auto fine = make_space(SpaceKind::dirichlet_sine, 1, 2, 2.0, 1001);
  const DiscreteField u{fine, 2, {1.0 / std::sqrt(2.0), 0.0}};
  CHECK(pair(p_laplace_apply(u, 3.0, 0.0), u) == doctest::Approx(4.0 * kPi * kPi / 3.0).epsilon(1e-11));
  CHECK_THROWS_AS(p_laplace_apply(u, 1.0, 0.0), ConfigError);
}

TEST_CASE("p < 2 with delta = 0 uses the zero-gradient convention") {
  auto sp = make_space(SpaceKind::dirichlet_sine, 1, 2, 2.0, 9);  // node at x=0.5 where grad phi1 = 0
  const auto b = p_laplace_apply(basis_field(sp, 0), 1.5, 0.0);
  for (double v : b) CHECK(std::isfinite(v));
  CHECK(b[0] > 0.0);
}

TEST_CASE("Nemytskii pairings") {
  auto sp = make_space(SpaceKind::dirichlet_sine, 1, 3);
  const DiscreteField u{sp, 3, {1.0 / std::sqrt(2.0), 0.0, 0.0}};  // sin(pi x)
  // int sin^4 = 3/8, exact for the midpoint rule with >= 3 nodes
  CHECK(pair(nemytskii_apply(u, power(1.0, 4), 0.0), u) == doctest::Approx(0.375).epsilon(1e-14));
  for (double v : nemytskii_apply(zero_field(sp), power(1.0, 4), 0.0)) CHECK(v == 0.0);

  NemytskiiSpec sat;
  sat.kind = NemytskiiSpec::Kind::saturating;
  sat.c = 1.0;
  auto fine = make_space(SpaceKind::dirichlet_sine, 1, 1, 2.0, 400);
  const auto phi1 = basis_field(fine, 0);
  const double val = pair(nemytskii_apply(phi1, sat, 0.0), phi1);
  CHECK(val > 0.0);
  CHECK(val < 1.0);
  // int 2 sin^2/(1 + 2 sin^2) = 1 - 1/sqrt(3)
  CHECK(val == doctest::Approx(1.0 - 1.0 / std::sqrt(3.0)).epsilon(1e-12));

  auto torus = make_space(SpaceKind::torus_divfree, 2, 1);
  CHECK_THROWS_AS(nemytskii_apply(zero_field(torus), sat, 0.0), KindError);
}

TEST_CASE("Taylor-Green field has the expected solenoidal coefficients") {
  auto sp = make_space(SpaceKind::torus_divfree, 2, 2);
  const auto tg = taylor_green(sp);
  for (std::size_t i = 0; i < tg.size(); ++i) {
    const auto& m = sp->mode(i);
    double expect = 0.0;
    if (m.parity == 1 && m.k == std::array<int, 2>{1, 1}) expect = -kPi;
    if (m.parity == 1 && m.k == std::array<int, 2>{1, -1}) expect = kPi;
    CHECK(std::abs(tg.coeffs[i] - expect) < 1e-12);
  }
  CHECK(norm_H(tg) == doctest::Approx(std::sqrt(2.0) * kPi));
}

TEST_CASE("convection pairings") {
  auto sp = make_space(SpaceKind::torus_divfree, 2, 3);
  const auto tg = taylor_green(sp);
  CHECK(std::abs(pair(convection_apply(tg), tg)) < 1e-12);
  for (double v : convection_apply(zero_field(sp))) CHECK(v == 0.0);

  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 10; ++trial) {
    const auto u = random_field(sp, rng);
    const double lam = std::uniform_real_distribution<double>(-3.0, 3.0)(rng);
    const auto b = convection_apply(u), bl = convection_apply(lam * u);
    for (std::size_t k = 0; k < b.size(); ++k) CHECK(std::abs(bl[k] - lam * lam * b[k]) <= 1e-10 * (1 + std::abs(bl[k])));
  }
  auto sine = make_space(SpaceKind::dirichlet_sine, 1, 2);
  CHECK_THROWS_AS(convection_apply(zero_field(sine)), KindError);
}

TEST_CASE("family_apply sums its parts") {
  auto sp = make_space(SpaceKind::dirichlet_sine, 1, 4);
  const auto phi1 = basis_field(sp, 0);
  const OperatorFamily single(Rational(2), 0.0, {std::make_shared<PLaplacePart>(2.0, 0.0)});
  CHECK(family_apply(single, 0.0, phi1) == p_laplace_apply(phi1, 2.0, 0.0));

  const OperatorFamily a2(Rational(2), 0.0,
                          {std::make_shared<PLaplacePart>(2.0, 0.0), std::make_shared<NemytskiiPart>(power(1.0, 4))});
  const auto sum = family_apply(a2, 0.0, phi1);
  const auto b3 = p_laplace_apply(phi1, 2.0, 0.0), b4 = nemytskii_apply(phi1, power(1.0, 4), 0.0);
  for (std::size_t k = 0; k < sum.size(); ++k) CHECK(sum[k] == doctest::Approx(b3[k] + b4[k]).epsilon(1e-14));
  // <A2 phi1, phi1> = pi^2 + int 4 sin^4 = pi^2 + 3/2
  CHECK(pair(sum, phi1) == doctest::Approx(kPi * kPi + 1.5).epsilon(1e-13));

  CHECK_THROWS_AS(OperatorFamily(Rational(2), 0.0, {}), ConfigError);
  CHECK_THROWS_AS(OperatorFamily(Rational(1, 2), 0.0, {std::make_shared<PLaplacePart>(2.0, 0.0)}), ConfigError);
}

TEST_CASE("assemble_rhs") {
  auto sp = make_space(SpaceKind::dirichlet_sine, 1, 3);
  for (double v : assemble_rhs(*sp, 3, ForcingSpec{}, 0.3)) CHECK(v == 0.0);
  ForcingSpec f;
  f.kind = ForcingSpec::Kind::mode;
  f.mode = 1;
  f.time = TimeProfile::constant_of(1.0);
  CHECK(assemble_rhs(*sp, 3, f, 0.7) == std::vector<double>{1.0, 0.0, 0.0});
  f.mode = 2;
  f.time = TimeProfile::exp_of(1.0, 1.0);
  const auto g = assemble_rhs(*sp, 3, f, 1.0);
  CHECK(g[1] == doctest::Approx(std::exp(-1.0)));
  CHECK(g[0] == 0.0);
  // separable bump sin(pi x) = phi1 / sqrt 2
  ForcingSpec sep;
  sep.kind = ForcingSpec::Kind::separable;
  sep.time = TimeProfile::constant_of(2.0);
  const auto b = assemble_rhs(*sp, 3, sep, 0.0);
  CHECK(b[0] == doctest::Approx(std::sqrt(2.0)).epsilon(1e-14));
  CHECK(std::abs(b[1]) < 1e-14);
}

TEST_CASE("principal part is monotone") {
  std::mt19937_64 rng(99);
  auto sp = make_space(SpaceKind::dirichlet_sine, 2, 4);
  for (double p : {1.5, 2.0, 3.0})
    for (double delta : {0.0, 0.1}) {
      double worst = 0.0;
      for (int trial = 0; trial < 100; ++trial) {
        const auto u = random_field(sp, rng), v = random_field(sp, rng);
        const auto bu = p_laplace_apply(u, p, delta), bv = p_laplace_apply(v, p, delta);
        const auto d = u - v;
        double s = 0.0;
        for (std::size_t k = 0; k < d.size(); ++k) s += (bu[k] - bv[k]) * d.coeffs[k];
        worst = std::min(worst, s);
      }
      CHECK(worst >= -1e-10);
    }
}

TEST_CASE("p-Laplace is (p-1)-homogeneous for delta = 0") {
  std::mt19937_64 rng(4);
  auto sp = make_space(SpaceKind::dirichlet_sine, 1, 6);
  for (double p : {1.5, 2.5, 3.0}) {
    const auto u = random_field(sp, rng);
    const double lam = 2.7;
    const auto a = p_laplace_apply(lam * u, p, 0.0), b = p_laplace_apply(u, p, 0.0);
    for (std::size_t k = 0; k < a.size(); ++k) CHECK(rel_diff(a[k], std::pow(lam, p - 1.0) * b[k]) < 1e-12);
  }
}

TEST_CASE("symmetry of duality: basis pairings agree with direct quadrature against v") {
  std::mt19937_64 rng(17);
  for (auto [kind, p] : {std::pair{SpaceKind::dirichlet_sine, 3.0}, std::pair{SpaceKind::torus_divfree, 2.5}}) {
    auto sp = make_space(kind, 2, 3);
    const auto u = random_field(sp, rng), v = random_field(sp, rng);
    const double via_basis = pair(p_laplace_apply(u, p, 0.0), v);
    // independent assembly: int |Du|^{p-2} Du : Dv directly at the nodes
    const auto nu = eval_on_quad(u), nv = eval_on_quad(v);
    const std::size_t c0 = sp->value_channels();
    double direct = 0.0;
    for (std::size_t q = 0; q < sp->nodes(); ++q) {
      double g2 = 0.0, gv = 0.0;
      for (std::size_t c = 0; c < sp->grad_channels(); ++c) {
        g2 += nu.at(c0 + c, q) * nu.at(c0 + c, q);
        gv += nu.at(c0 + c, q) * nv.at(c0 + c, q);
      }
      direct += sp->weights()[q] * std::pow(g2, 0.5 * (p - 2.0)) * gv;
    }
    CHECK(rel_diff(via_basis, direct) < 1e-10);
  }
}

TEST_CASE("Jacobians match central differences of the operator") {
  std::mt19937_64 rng(8);
  NemytskiiSpec sat;
  sat.kind = NemytskiiSpec::Kind::sum;
  sat.a = 0.5;
  sat.r = 3;
  sat.c = -0.7;
  auto sine = make_space(SpaceKind::dirichlet_sine, 2, 3);
  auto torus = make_space(SpaceKind::torus_divfree, 2, 2);
  const OperatorFamily scalar_family(Rational(3), 0.1,
                                     {std::make_shared<PLaplacePart>(3.0, 0.1), std::make_shared<NemytskiiPart>(sat),
                                      std::make_shared<NemytskiiPart>(power(1.0, 4))});
  const OperatorFamily fluid(Rational(5, 2), 0.0,
                             {std::make_shared<PLaplacePart>(2.5, 0.0), std::make_shared<ConvectionPart>()});
  for (const auto& [family, space] : {std::pair{&scalar_family, sine}, std::pair{&fluid, torus}}) {
    const auto u = random_field(space, rng);
    const auto jac = family->jacobian(u, 0.0);
    const std::size_t n = u.size();
    double worst = 0.0;
    for (std::size_t l = 0; l < n; ++l) {
      auto up = u, um = u;
      const double h = 1e-5;
      up.coeffs[l] += h;
      um.coeffs[l] -= h;
      const auto ap = family->apply(up, 0.0), am = family->apply(um, 0.0);
      for (std::size_t k = 0; k < n; ++k) {
        const double fd = (ap[k] - am[k]) / (2 * h);
        worst = std::max(worst, std::abs(fd - jac[k * n + l]) / (1.0 + std::abs(fd)));
      }
    }
    CHECK(worst < 1e-5);
  }
}

TEST_CASE("built-in nonlinearities satisfy the sign condition with the derived C8") {
  std::vector<NemytskiiSpec> specs;
  specs.push_back(power(1.0, 4));
  NemytskiiSpec sat;
  sat.kind = NemytskiiSpec::Kind::saturating;
  sat.c = -2.0;
  specs.push_back(sat);
  NemytskiiSpec sum;
  sum.kind = NemytskiiSpec::Kind::sum;
  sum.a = 0.3;
  sum.r = Rational(5, 2);
  sum.c = 1.5;
  sum.c7 = TimeProfile::exp_of(2.0, 0.5);
  specs.push_back(sum);
  for (const auto& g : specs) {
    for (double t : {0.0, 0.5, 1.0})
      for (double x : {0.1, 0.5, 0.9}) {
        const double b = std::sin(kPi * x);
        for (double s = -20.0; s <= 20.0; s += 0.01) {
          const double gs = (g.g_local(s) + g.c7(t) * b) * s;
          CHECK(gs >= -g.c8(t) - 1e-12);
        }
      }
  }
}
