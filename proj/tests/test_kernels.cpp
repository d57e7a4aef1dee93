#include <doctest.h>

#include <cmath>
#include <random>

#include "galerkin/operators.hpp"
#include "galerkin/simd/kernels.hpp"
#include "test_support.hpp"

using namespace galerkin;
using galerkin::testing::normal_vector;

namespace {

std::vector<const simd::KernelTable*> vector_variants() {
  std::vector<const simd::KernelTable*> out;
  if (auto* k = simd::avx2_kernels()) out.push_back(k);
  if (auto* k = simd::neon_kernels()) out.push_back(k);
  return out;
}

struct KernelGuard {
  ~KernelGuard() { simd::select_kernels("auto"); }
};

}  // namespace

TEST_CASE("vector kernels match the scalar reference for every length") {
  std::mt19937_64 rng(7);
  const auto& ref = simd::scalar_kernels();
  for (const auto* kern : vector_variants()) {
    CAPTURE(kern->name);
    for (std::size_t n = 0; n < 41; ++n) {
      const auto a = normal_vector(rng, n), b = normal_vector(rng, n);
      const double d_ref = ref.dot(a.data(), b.data(), n);
      const double d_vec = kern->dot(a.data(), b.data(), n);
      double mag = 0.0;
      for (std::size_t i = 0; i < n; ++i) mag += std::abs(a[i] * b[i]);
      CHECK(std::abs(d_ref - d_vec) <= 1e-14 * (1.0 + mag));

      auto y_ref = normal_vector(rng, n), y_vec = y_ref;
      ref.axpy(-1.75, a.data(), y_ref.data(), n);
      kern->axpy(-1.75, a.data(), y_vec.data(), n);
      for (std::size_t i = 0; i < n; ++i) CHECK(y_vec[i] == doctest::Approx(y_ref[i]).epsilon(1e-15));

      auto h_ref = normal_vector(rng, n), h_vec = h_ref;
      ref.hadamard_acc(a.data(), b.data(), h_ref.data(), n);
      kern->hadamard_acc(a.data(), b.data(), h_vec.data(), n);
      for (std::size_t i = 0; i < n; ++i) CHECK(h_vec[i] == doctest::Approx(h_ref[i]).epsilon(1e-15));
    }
  }
}

TEST_CASE("gemm_nt matches the scalar reference on ragged shapes") {
  std::mt19937_64 rng(11);
  const auto& ref = simd::scalar_kernels();
  for (const auto* kern : vector_variants()) {
    CAPTURE(kern->name);
    for (std::size_t m : {1u, 3u, 4u, 7u, 9u})
      for (std::size_t n : {1u, 2u, 5u, 8u})
        for (std::size_t k : {1u, 3u, 4u, 13u, 64u}) {
          const auto a = normal_vector(rng, m * k), b = normal_vector(rng, n * k);
          auto c_ref = normal_vector(rng, m * n), c_vec = c_ref;
          ref.gemm_nt(a.data(), b.data(), c_ref.data(), m, n, k);
          kern->gemm_nt(a.data(), b.data(), c_vec.data(), m, n, k);
          for (std::size_t i = 0; i < m * n; ++i)
            CHECK(std::abs(c_ref[i] - c_vec[i]) <= 1e-13 * (1.0 + std::abs(c_ref[i])) * std::sqrt(double(k)));
        }
  }
}

TEST_CASE("kernel selection") {
  KernelGuard guard;
  CHECK(simd::select_kernels("scalar"));
  CHECK(std::string(simd::active_kernels().name) == "scalar");
  CHECK_FALSE(simd::select_kernels("sse9"));
  CHECK(std::string(simd::active_kernels().name) == "scalar");
  CHECK(simd::select_kernels("auto"));
  if (simd::avx2_kernels()) CHECK(std::string(simd::active_kernels().name) == "avx2");
}

TEST_CASE("operator evaluation and Jacobians agree across kernel variants") {
  KernelGuard guard;
  std::mt19937_64 rng(3);
  auto sine = make_space(SpaceKind::dirichlet_sine, 2, 5);
  auto torus = make_space(SpaceKind::torus_divfree, 2, 3);
  NemytskiiSpec g;
  g.a = 1.0;
  g.r = 4;
  const OperatorFamily scalar_family(
      Rational(3), 0.0, {std::make_shared<PLaplacePart>(3.0, 0.0), std::make_shared<NemytskiiPart>(g)});
  const OperatorFamily fluid(Rational(5, 2), 0.0,
                             {std::make_shared<PLaplacePart>(2.5, 0.0), std::make_shared<ConvectionPart>()});
  const auto u = galerkin::testing::random_field(sine, rng);
  const auto v = galerkin::testing::random_field(torus, rng);

  simd::select_kernels("scalar");
  const auto a_ref = scalar_family.apply(u, 0.0), j_ref = scalar_family.jacobian(u, 0.0);
  const auto b_ref = fluid.apply(v, 0.0), k_ref = fluid.jacobian(v, 0.0);
  for (const auto* kern : vector_variants()) {
    REQUIRE(simd::select_kernels(kern->name));
    const auto a = scalar_family.apply(u, 0.0), j = scalar_family.jacobian(u, 0.0);
    const auto b = fluid.apply(v, 0.0), k = fluid.jacobian(v, 0.0);
    for (std::size_t i = 0; i < a.size(); ++i) CHECK(galerkin::testing::rel_diff(a[i], a_ref[i]) < 1e-12);
    for (std::size_t i = 0; i < j.size(); ++i) CHECK(galerkin::testing::rel_diff(j[i], j_ref[i]) < 1e-11);
    for (std::size_t i = 0; i < b.size(); ++i) CHECK(galerkin::testing::rel_diff(b[i], b_ref[i]) < 1e-12);
    for (std::size_t i = 0; i < k.size(); ++i) CHECK(galerkin::testing::rel_diff(k[i], k_ref[i]) < 1e-9);
  }
}
