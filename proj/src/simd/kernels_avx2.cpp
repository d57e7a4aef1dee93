// Compiled with -mavx2 -mfma; only reached after a runtime CPU check.
#include "galerkin/simd/kernels.hpp"

#include <immintrin.h>

namespace galerkin::simd::detail {
namespace {

inline double hsum(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d s = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

double dot_avx2(const double* a, const double* b, std::size_t n) {
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc0);
    acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i + 4), _mm256_loadu_pd(b + i + 4), acc1);
  }
  for (; i + 4 <= n; i += 4)
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc0);
  double s = hsum(_mm256_add_pd(acc0, acc1));
  for (; i < n; ++i) s += a[i] * b[i];
  return s;
}

void axpy_avx2(double alpha, const double* x, double* y, std::size_t n) {
  const __m256d va = _mm256_set1_pd(alpha);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4)
    _mm256_storeu_pd(y + i, _mm256_fmadd_pd(va, _mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i)));
  for (; i < n; ++i) y[i] += alpha * x[i];
}

void hadamard_acc_avx2(const double* s, const double* x, double* y, std::size_t n) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4)
    _mm256_storeu_pd(y + i, _mm256_fmadd_pd(_mm256_loadu_pd(s + i), _mm256_loadu_pd(x + i),
                                            _mm256_loadu_pd(y + i)));
  for (; i < n; ++i) y[i] += s[i] * x[i];
}

// 4x2 register block of row dot products; B rows are streamed m/4 times.
void gemm_nt_avx2(const double* a, const double* b, double* c, std::size_t m, std::size_t n,
                  std::size_t k) {
  const std::size_t k4 = k & ~std::size_t{3};
  std::size_t i = 0;
  for (; i + 4 <= m; i += 4) {
    const double* a0 = a + i * k;
    const double* a1 = a0 + k;
    const double* a2 = a1 + k;
    const double* a3 = a2 + k;
    std::size_t j = 0;
    for (; j + 2 <= n; j += 2) {
      const double* b0 = b + j * k;
      const double* b1 = b0 + k;
      __m256d c00 = _mm256_setzero_pd(), c01 = _mm256_setzero_pd();
      __m256d c10 = _mm256_setzero_pd(), c11 = _mm256_setzero_pd();
      __m256d c20 = _mm256_setzero_pd(), c21 = _mm256_setzero_pd();
      __m256d c30 = _mm256_setzero_pd(), c31 = _mm256_setzero_pd();
      for (std::size_t p = 0; p < k4; p += 4) {
        const __m256d vb0 = _mm256_loadu_pd(b0 + p);
        const __m256d vb1 = _mm256_loadu_pd(b1 + p);
        __m256d va = _mm256_loadu_pd(a0 + p);
        c00 = _mm256_fmadd_pd(va, vb0, c00);
        c01 = _mm256_fmadd_pd(va, vb1, c01);
        va = _mm256_loadu_pd(a1 + p);
        c10 = _mm256_fmadd_pd(va, vb0, c10);
        c11 = _mm256_fmadd_pd(va, vb1, c11);
        va = _mm256_loadu_pd(a2 + p);
        c20 = _mm256_fmadd_pd(va, vb0, c20);
        c21 = _mm256_fmadd_pd(va, vb1, c21);
        va = _mm256_loadu_pd(a3 + p);
        c30 = _mm256_fmadd_pd(va, vb0, c30);
        c31 = _mm256_fmadd_pd(va, vb1, c31);
      }
      double r[8] = {hsum(c00), hsum(c01), hsum(c10), hsum(c11),
                     hsum(c20), hsum(c21), hsum(c30), hsum(c31)};
      for (std::size_t p = k4; p < k; ++p) {
        r[0] += a0[p] * b0[p];
        r[1] += a0[p] * b1[p];
        r[2] += a1[p] * b0[p];
        r[3] += a1[p] * b1[p];
        r[4] += a2[p] * b0[p];
        r[5] += a2[p] * b1[p];
        r[6] += a3[p] * b0[p];
        r[7] += a3[p] * b1[p];
      }
      c[i * n + j] += r[0];
      c[i * n + j + 1] += r[1];
      c[(i + 1) * n + j] += r[2];
      c[(i + 1) * n + j + 1] += r[3];
      c[(i + 2) * n + j] += r[4];
      c[(i + 2) * n + j + 1] += r[5];
      c[(i + 3) * n + j] += r[6];
      c[(i + 3) * n + j + 1] += r[7];
    }
    for (; j < n; ++j) {
      const double* bj = b + j * k;
      c[i * n + j] += dot_avx2(a0, bj, k);
      c[(i + 1) * n + j] += dot_avx2(a1, bj, k);
      c[(i + 2) * n + j] += dot_avx2(a2, bj, k);
      c[(i + 3) * n + j] += dot_avx2(a3, bj, k);
    }
  }
  for (; i < m; ++i)
    for (std::size_t j = 0; j < n; ++j) c[i * n + j] += dot_avx2(a + i * k, b + j * k, k);
}

}  // namespace

extern const KernelTable kAvx2Table;
const KernelTable kAvx2Table{"avx2", dot_avx2, axpy_avx2, hadamard_acc_avx2, gemm_nt_avx2};

}  // namespace galerkin::simd::detail
