#include <atomic>

#include "cokern/simd.hpp"

namespace cokern::simd {
namespace {

bool cpu_has_avx2() {
#if defined(COKERN_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

Backend detect() { return cpu_has_avx2() ? Backend::kAvx2 : Backend::kScalar; }

std::atomic<Backend>& current() {
  static std::atomic<Backend> b{detect()};
  return b;
}

}  // namespace

const KernelTable& kernels(Backend b) {
#if defined(COKERN_HAVE_AVX2)
  if (b == Backend::kAvx2) return avx2::table;
#endif
  (void)b;
  return scalar::table;
}

const KernelTable& kernels() { return kernels(current().load(std::memory_order_relaxed)); }

Backend active_backend() { return current().load(std::memory_order_relaxed); }

bool backend_available(Backend b) {
  switch (b) {
    case Backend::kScalar:
      return true;
    case Backend::kAvx2:
      return cpu_has_avx2();
  }
  return false;
}

void set_backend(Backend b) {
  if (!backend_available(b)) {
    throw ValidationError("SIMD backend '" + std::string(backend_name(b)) + "' is not available on this CPU");
  }
  current().store(b);
}

void reset_backend() { current().store(detect()); }

std::string_view backend_name(Backend b) {
  switch (b) {
    case Backend::kScalar:
      return "scalar";
    case Backend::kAvx2:
      return "avx2";
  }
  return "unknown";
}

std::vector<Backend> available_backends() {
  std::vector<Backend> out{Backend::kScalar};
  if (backend_available(Backend::kAvx2)) out.push_back(Backend::kAvx2);
  return out;
}

}  // namespace cokern::simd
