#pragma once
// Dense inner-loop kernels used by quadrature synthesis, analysis and
// Jacobian assembly. Each kernel set (scalar, AVX2, NEON) implements the
// same table; the active set is picked once at startup from CPU features
// and can be overridden with GALERKIN_SIMD=scalar|avx2|neon|auto.

#include <cstddef>
#include <span>
#include <string_view>

namespace galerkin::simd {

struct KernelTable {
  const char* name;
  // sum_i a[i] * b[i]
  double (*dot)(const double* a, const double* b, std::size_t n);
  // y += alpha * x
  void (*axpy)(double alpha, const double* x, double* y, std::size_t n);
  // y += s .* x
  void (*hadamard_acc)(const double* s, const double* x, double* y, std::size_t n);
  // c (m x n, row-major) += a (m x k, row-major) * b (n x k, row-major)^T
  void (*gemm_nt)(const double* a, const double* b, double* c, std::size_t m,
                  std::size_t n, std::size_t k);
};

const KernelTable& scalar_kernels();

/// nullptr when the variant was not compiled in or the CPU lacks the feature.
const KernelTable* avx2_kernels();
const KernelTable* neon_kernels();

/// Kernel set used by the library. Thread-safe after first call.
const KernelTable& active_kernels();

/// Force a variant by name ("scalar", "avx2", "neon", "auto"). Returns false
/// if the requested variant is unavailable; the active set is unchanged then.
bool select_kernels(std::string_view name);

inline double dot(std::span<const double> a, std::span<const double> b) {
  return active_kernels().dot(a.data(), b.data(), a.size());
}

inline void axpy(double alpha, std::span<const double> x, std::span<double> y) {
  active_kernels().axpy(alpha, x.data(), y.data(), x.size());
}

inline void hadamard_acc(std::span<const double> s, std::span<const double> x,
                         std::span<double> y) {
  active_kernels().hadamard_acc(s.data(), x.data(), y.data(), x.size());
}

}  // namespace galerkin::simd
