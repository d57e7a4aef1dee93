#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <set>

#include "galerkin/errors.hpp"
#include "galerkin/spaces.hpp"
#include "test_support.hpp"

using namespace galerkin;
using galerkin::testing::random_field;

namespace {
constexpr double kPi = std::numbers::pi;
}

TEST_CASE("make_space: sine basis on (0,1)") {
  auto sp = make_space(SpaceKind::dirichlet_sine, 1, 3);
  REQUIRE(sp->size() == 3);
  const std::vector<double> x{0.3};
  for (std::size_t k = 0; k < 3; ++k) {
    const auto v = sp->eval_basis_at(k, x);
    CHECK(v[0] == doctest::Approx(std::sqrt(2.0) * std::sin((k + 1) * kPi * 0.3)).epsilon(1e-15));
    CHECK(v[1] == doctest::Approx(std::sqrt(2.0) * (k + 1) * kPi * std::cos((k + 1) * kPi * 0.3)).epsilon(1e-15));
  }
  CHECK(sp->quad_order() == 16);
}

TEST_CASE("make_space: divergence-free torus basis covers |k|_inf <= n, k != 0") {
  auto sp = make_space(SpaceKind::torus_divfree, 2, 2);
  CHECK(sp->size() == 24);
  CHECK(sp->size(1) == 8);
  std::set<std::pair<int, int>> seen;
  for (std::size_t i = 0; i < sp->size(); ++i) {
    const auto& m = sp->mode(i);
    CHECK(std::max(std::abs(m.k[0]), std::abs(m.k[1])) <= 2);
    CHECK((m.k[0] != 0 || m.k[1] != 0));
    // k and -k give the same real fields, so only one of them appears
    CHECK(seen.count({-m.k[0], -m.k[1]}) == 0);
    seen.insert({m.k[0], m.k[1]});
  }
  CHECK(seen.size() == 12);
}

TEST_CASE("make_space rejects unsupported configurations") {
  CHECK_THROWS_AS(make_space(SpaceKind::dirichlet_sine, 3, 2), ConfigError);
  CHECK_THROWS_AS(make_space(SpaceKind::torus_divfree, 1, 2), ConfigError);
  CHECK_THROWS_AS(make_space(SpaceKind::dirichlet_sine, 1, 0), ConfigError);
  CHECK_THROWS_AS(make_space(SpaceKind::dirichlet_sine, 1, 4, 2.0, 9), ConfigError);
  CHECK_NOTHROW(make_space(SpaceKind::dirichlet_sine, 1, 4, 2.0, 10));
}

TEST_CASE("bases are L2-orthonormal under quadrature") {
  for (auto [kind, dim, level] : {std::tuple{SpaceKind::dirichlet_sine, 1, 8},
                                  std::tuple{SpaceKind::dirichlet_sine, 2, 4},
                                  std::tuple{SpaceKind::torus_divfree, 2, 3}}) {
    auto sp = make_space(kind, dim, level);
    for (std::size_t i = 0; i < sp->size(); ++i)
      for (std::size_t j = 0; j < sp->size(); ++j) {
        const double g = mass_pairing_quadrature(basis_field(sp, i), basis_field(sp, j));
        CHECK(std::abs(g - (i == j ? 1.0 : 0.0)) < 1e-12);
      }
  }
}

TEST_CASE("levels are nested: level n basis is a prefix of level n+1") {
  for (auto [kind, dim] : {std::pair{SpaceKind::dirichlet_sine, 1}, std::pair{SpaceKind::dirichlet_sine, 2},
                           std::pair{SpaceKind::torus_divfree, 2}}) {
    auto coarse = make_space(kind, dim, 3);
    auto fine = make_space(kind, dim, 4);
    const std::vector<double> pt{0.123, 0.456};
    for (std::size_t i = 0; i < coarse->size(); ++i) {
      CHECK(coarse->mode(i).k == fine->mode(i).k);
      CHECK(coarse->mode(i).parity == fine->mode(i).parity);
      const auto a = coarse->eval_basis_at(i, pt), b = fine->eval_basis_at(i, pt);
      for (std::size_t c = 0; c < a.size(); ++c) CHECK(a[c] == b[c]);
    }
    CHECK(fine->size(3) == coarse->size());
  }
}

TEST_CASE("torus basis fields are divergence-free at every node") {
  auto sp = make_space(SpaceKind::torus_divfree, 2, 4);
  double worst = 0.0;
  for (std::size_t i = 0; i < sp->size(); ++i) {
    const auto d11 = sp->table(2, i), d22 = sp->table(5, i);
    for (std::size_t q = 0; q < sp->nodes(); ++q) worst = std::max(worst, std::abs(d11[q] + d22[q]));
  }
  CHECK(worst <= 1e-12);
}

TEST_CASE("project truncates, is idempotent and rejects upward levels") {
  auto sp = make_space(SpaceKind::dirichlet_sine, 1, 3);
  const DiscreteField u{sp, 3, {1.0, 0.0, 1.0}};
  const auto p2 = project(u, 2);
  CHECK(p2.level == 2);
  CHECK(p2.coeffs == std::vector<double>{1.0, 0.0});
  CHECK(project(project(u, 2), 2).coeffs == p2.coeffs);
  CHECK_THROWS_AS(project(p2, 3), LevelError);
}

TEST_CASE("projection properties on random fields") {
  std::mt19937_64 rng(1234);
  for (auto [kind, dim, level] : {std::tuple{SpaceKind::dirichlet_sine, 1, 12},
                                  std::tuple{SpaceKind::dirichlet_sine, 2, 6},
                                  std::tuple{SpaceKind::torus_divfree, 2, 4}}) {
    auto sp = make_space(kind, dim, level);
    for (int trial = 0; trial < 40; ++trial) {
      const auto u = random_field(sp, rng), v = random_field(sp, rng);
      for (int m = 1; m <= level; ++m) {
        // self-adjointness in H
        CHECK(std::abs(mass_pairing(project(u, m), v) - mass_pairing(u, project(v, m))) <= 1e-12);
        // contraction in H^s
        for (double s : {0.0, 1.0, 2.0, 3.5}) CHECK(norm_Hs(project(u, m), s) <= norm_Hs(u, s));
        // nesting
        for (int k = 1; k <= m; ++k) CHECK(project(project(u, m), k).coeffs == project(u, k).coeffs);
      }
    }
  }
}

TEST_CASE("mass pairing and H norm in coefficients") {
  auto sp = make_space(SpaceKind::dirichlet_sine, 1, 2);
  CHECK(mass_pairing(basis_field(sp, 0), basis_field(sp, 0)) == 1.0);
  CHECK(mass_pairing(basis_field(sp, 0), basis_field(sp, 1)) == 0.0);
  CHECK(mass_pairing(DiscreteField{sp, 2, {2, 3}}, DiscreteField{sp, 2, {1, -1}}) == -1.0);
  CHECK(norm_H(basis_field(sp, 0)) == 1.0);
  CHECK(norm_H(zero_field(sp)) == 0.0);
  CHECK(norm_H(DiscreteField{sp, 2, {3, 4}}) == 5.0);
  auto other = make_space(SpaceKind::torus_divfree, 2, 1);
  CHECK_THROWS_AS(mass_pairing(basis_field(sp, 0), basis_field(other, 0)), KindError);
}

TEST_CASE("norm_V by quadrature") {
  // int_0^1 2 pi^2 cos^2(pi x) dx = pi^2
  auto sp = make_space(SpaceKind::dirichlet_sine, 1, 1);
  CHECK(norm_V(basis_field(sp, 0), 2.0) == doctest::Approx(kPi).epsilon(1e-14));
  CHECK(norm_V(zero_field(sp), 2.0) == 0.0);
  CHECK(norm_V(zero_field(sp), 3.0) == 0.0);
  // sin(pi x), p = 3: (int |pi cos pi x|^3)^{1/3} = (4 pi^2 / 3)^{1/3}; midpoint error ~1e-12 at N=1001
  auto fine = make_space(SpaceKind::dirichlet_sine, 1, 1, 2.0, 1001);
  const DiscreteField u{fine, 1, {1.0 / std::sqrt(2.0)}};
  CHECK(norm_V(u, 3.0) == doctest::Approx(std::cbrt(4.0 * kPi * kPi / 3.0)).epsilon(1e-11));
  CHECK_THROWS_AS(norm_V(u, 1.0), ConfigError);
}

TEST_CASE("norm_V(u,2)^2 matches the spectral formula") {
  std::mt19937_64 rng(5);
  for (auto [kind, dim, level] : {std::tuple{SpaceKind::dirichlet_sine, 1, 16},
                                  std::tuple{SpaceKind::dirichlet_sine, 2, 5},
                                  std::tuple{SpaceKind::torus_divfree, 2, 4}}) {
    auto sp = make_space(kind, dim, level);
    for (int trial = 0; trial < 20; ++trial) {
      const auto u = random_field(sp, rng);
      double spectral = 0.0;
      for (std::size_t i = 0; i < u.size(); ++i) spectral += sp->mode(i).wavenumber_sq * u.coeffs[i] * u.coeffs[i];
      CHECK(galerkin::testing::rel_diff(std::pow(norm_V(u, 2.0), 2), spectral) <= 1e-10);
    }
  }
}

TEST_CASE("dual Z* norm from pairings") {
  auto sp = make_space(SpaceKind::dirichlet_sine, 1, 3);
  const std::vector<double> g{1.0, 0.0, 0.0};
  CHECK(dual_norm_Zstar(g, *sp, 1.0) == doctest::Approx(1.0 / std::sqrt(1.0 + kPi * kPi)).epsilon(1e-15));
  const std::vector<double> h{3.0, 0.0, 4.0};
  CHECK(dual_norm_Zstar(h, *sp, 0.0) == doctest::Approx(5.0));
  CHECK(dual_norm_Zstar(std::vector<double>(3, 0.0), *sp, 2.0) == 0.0);
}

TEST_CASE("eval_on_quad") {
  auto sp = make_space(SpaceKind::dirichlet_sine, 1, 3, 2.0, 9);  // node 4 sits at x = 0.5
  const auto phi1 = basis_field(sp, 0);
  const auto nf = eval_on_quad(phi1);
  REQUIRE(sp->coords(0)[4] == doctest::Approx(0.5));
  CHECK(nf.at(0, 4) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));
  CHECK(std::abs(nf.at(1, 4)) < 1e-14);
  const std::vector<double> half{0.5};
  CHECK(eval_at(phi1, half)[0] == doctest::Approx(std::sqrt(2.0)));

  std::mt19937_64 rng(9);
  const auto u = random_field(sp, rng), v = random_field(sp, rng);
  const auto a = eval_on_quad(u), b = eval_on_quad(v), ab = eval_on_quad(u + v);
  for (std::size_t i = 0; i < ab.data.size(); ++i) CHECK(ab.data[i] == doctest::Approx(a.data[i] + b.data[i]).epsilon(1e-13));
}
