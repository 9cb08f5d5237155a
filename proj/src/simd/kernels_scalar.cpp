#include "cokern/simd.hpp"

namespace cokern::simd::scalar {
namespace {

void apply_1q(std::span<cplx> amps, std::size_t stride, const Gate1Q& g) {
  const cplx m00 = g.m[0], m01 = g.m[1], m10 = g.m[2], m11 = g.m[3];
  const std::size_t dim = amps.size();
  for (std::size_t base = 0; base < dim; base += 2 * stride) {
    for (std::size_t i = base; i < base + stride; ++i) {
      const cplx a0 = amps[i];
      const cplx a1 = amps[i + stride];
      amps[i] = m00 * a0 + m01 * a1;
      amps[i + stride] = m10 * a0 + m11 * a1;
    }
  }
}

void apply_cz(std::span<cplx> amps, std::size_t lo_bit, std::size_t hi_bit) {
  const std::size_t mask = lo_bit | hi_bit;
  for (std::size_t i = 0; i < amps.size(); ++i) {
    if ((i & mask) == mask) amps[i] = -amps[i];
  }
}

cplx inner(std::span<const cplx> a, std::span<const cplx> b) {
  double re = 0.0, im = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double ar = a[i].real(), ai = a[i].imag();
    const double br = b[i].real(), bi = b[i].imag();
    re += ar * br + ai * bi;
    im += ar * bi - ai * br;
  }
  return {re, im};
}

double norm2(std::span<const cplx> a) {
  double s = 0.0;
  for (const auto& z : a) s += z.real() * z.real() + z.imag() * z.imag();
  return s;
}

void probabilities(std::span<const cplx> a, std::span<double> out) {
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = std::norm(a[i]);
}

}  // namespace

const KernelTable table{&apply_1q, &apply_cz, &inner, &norm2, &probabilities};

}  // namespace cokern::simd::scalar
