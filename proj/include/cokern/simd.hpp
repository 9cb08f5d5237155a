#pragma once

// Inner-loop kernels for dense statevectors. Every kernel has a scalar
// reference implementation; vectorized variants are selected at runtime
// from what the CPU supports and are tested for equivalence against it.

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

#include "cokern/types.hpp"

namespace cokern::simd {

enum class Backend { kScalar, kAvx2 };

struct KernelTable {
  /// Applies g to every amplitude pair (i, i + stride) where bit `stride` of i is 0.
  void (*apply_1q)(std::span<cplx> amps, std::size_t stride, const Gate1Q& g);
  /// Negates every amplitude whose index has both single-bit masks set (lo_bit < hi_bit).
  void (*apply_cz)(std::span<cplx> amps, std::size_t lo_bit, std::size_t hi_bit);
  /// sum_i conj(a_i) * b_i
  cplx (*inner)(std::span<const cplx> a, std::span<const cplx> b);
  double (*norm2)(std::span<const cplx> a);
  void (*probabilities)(std::span<const cplx> a, std::span<double> out);
};

const KernelTable& kernels();
const KernelTable& kernels(Backend b);

Backend active_backend();
bool backend_available(Backend b);
/// Forces a backend (tests, benchmarks). Throws ValidationError if the CPU lacks it.
void set_backend(Backend b);
/// Re-runs CPU detection and picks the widest available backend.
void reset_backend();
std::string_view backend_name(Backend b);
std::vector<Backend> available_backends();

namespace scalar {
extern const KernelTable table;
}
#if defined(COKERN_HAVE_AVX2)
namespace avx2 {
extern const KernelTable table;
}
#endif

}  // namespace cokern::simd
