#include <atomic>
#include <cstdlib>
#include <string>

#include "galerkin/simd/kernels.hpp"

namespace galerkin::simd {

namespace detail {
#if defined(GALERKIN_HAVE_AVX2)
extern const KernelTable kAvx2Table;
#endif
#if defined(GALERKIN_HAVE_NEON)
extern const KernelTable kNeonTable;
#endif
}  // namespace detail

const KernelTable* avx2_kernels() {
#if defined(GALERKIN_HAVE_AVX2)
  static const bool supported = [] {
    __builtin_cpu_init();
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
  }();
  return supported ? &detail::kAvx2Table : nullptr;
#else
  return nullptr;
#endif
}

const KernelTable* neon_kernels() {
#if defined(GALERKIN_HAVE_NEON)
  return &detail::kNeonTable;
#else
  return nullptr;
#endif
}

namespace {

const KernelTable* best_available() {
  if (const auto* k = avx2_kernels()) return k;
  if (const auto* k = neon_kernels()) return k;
  return &scalar_kernels();
}

const KernelTable* lookup(std::string_view name) {
  if (name == "scalar") return &scalar_kernels();
  if (name == "avx2") return avx2_kernels();
  if (name == "neon") return neon_kernels();
  if (name == "auto" || name.empty()) return best_available();
  return nullptr;
}

std::atomic<const KernelTable*>& active_slot() {
  static std::atomic<const KernelTable*> slot = [] {
    const char* env = std::getenv("GALERKIN_SIMD");
    const KernelTable* k = env ? lookup(env) : nullptr;
    return k ? k : best_available();
  }();
  return slot;
}

}  // namespace

const KernelTable& active_kernels() { return *active_slot().load(std::memory_order_acquire); }

bool select_kernels(std::string_view name) {
  const KernelTable* k = lookup(name);
  if (!k) return false;
  active_slot().store(k, std::memory_order_release);
  return true;
}

}  // namespace galerkin::simd
