// Compiled with -mavx2 -mfma; only reached after the dispatcher has
// confirmed CPU support.

#include <immintrin.h>

#include "cokern/simd.hpp"

namespace cokern::simd::avx2 {
namespace {

// Two complex doubles per register: [re0, im0, re1, im1].
inline __m256d cmul(__m256d a, __m256d b) {
  const __m256d a_re = _mm256_movedup_pd(a);
  const __m256d a_im = _mm256_permute_pd(a, 0xF);
  const __m256d b_sw = _mm256_permute_pd(b, 0x5);
  return _mm256_fmaddsub_pd(a_re, b, _mm256_mul_pd(a_im, b_sw));
}

inline __m256d broadcast(cplx z) { return _mm256_setr_pd(z.real(), z.imag(), z.real(), z.imag()); }

inline __m256d load2(const cplx* p) { return _mm256_loadu_pd(reinterpret_cast<const double*>(p)); }
inline void store2(cplx* p, __m256d v) { _mm256_storeu_pd(reinterpret_cast<double*>(p), v); }

inline double hsum(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d s = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

void apply_1q(std::span<cplx> amps, std::size_t stride, const Gate1Q& g) {
  const std::size_t dim = amps.size();
  cplx* a = amps.data();
  if (stride == 1) {
    const __m256d col0 = _mm256_setr_pd(g.m[0].real(), g.m[0].imag(), g.m[2].real(), g.m[2].imag());
    const __m256d col1 = _mm256_setr_pd(g.m[1].real(), g.m[1].imag(), g.m[3].real(), g.m[3].imag());
    for (std::size_t i = 0; i < dim; i += 2) {
      const __m256d v = load2(a + i);
      const __m256d lo = _mm256_permute2f128_pd(v, v, 0x00);
      const __m256d hi = _mm256_permute2f128_pd(v, v, 0x11);
      store2(a + i, _mm256_add_pd(cmul(col0, lo), cmul(col1, hi)));
    }
    return;
  }
  const __m256d m00 = broadcast(g.m[0]), m01 = broadcast(g.m[1]);
  const __m256d m10 = broadcast(g.m[2]), m11 = broadcast(g.m[3]);
  for (std::size_t base = 0; base < dim; base += 2 * stride) {
    for (std::size_t i = base; i < base + stride; i += 2) {
      const __m256d a0 = load2(a + i);
      const __m256d a1 = load2(a + i + stride);
      store2(a + i, _mm256_add_pd(cmul(m00, a0), cmul(m01, a1)));
      store2(a + i + stride, _mm256_add_pd(cmul(m10, a0), cmul(m11, a1)));
    }
  }
}

void apply_cz(std::span<cplx> amps, std::size_t lo_bit, std::size_t hi_bit) {
  const std::size_t mask = lo_bit | hi_bit;
  const std::size_t dim = amps.size();
  if (lo_bit < 2) {
    scalar::table.apply_cz(amps, lo_bit, hi_bit);
    return;
  }
  // Below lo_bit every index in a run of length lo_bit shares the two masked bits.
  const __m256d sign = _mm256_set1_pd(-0.0);
  cplx* a = amps.data();
  for (std::size_t start = 0; start < dim; start += lo_bit) {
    if ((start & mask) != mask) continue;
    for (std::size_t i = start; i < start + lo_bit; i += 2) store2(a + i, _mm256_xor_pd(load2(a + i), sign));
  }
}

cplx inner(std::span<const cplx> a, std::span<const cplx> b) {
  const std::size_t dim = a.size();
  __m256d acc_re = _mm256_setzero_pd();
  __m256d acc_im = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 2 <= dim; i += 2) {
    const __m256d va = load2(a.data() + i);
    const __m256d vb = load2(b.data() + i);
    acc_re = _mm256_fmadd_pd(va, vb, acc_re);
    acc_im = _mm256_fmadd_pd(va, _mm256_permute_pd(vb, 0x5), acc_im);
  }
  // acc_im lanes: [ar*bi, ai*br, ...]; imaginary part is even minus odd.
  alignas(32) double im_lanes[4];
  _mm256_store_pd(im_lanes, acc_im);
  double re = hsum(acc_re);
  double im = (im_lanes[0] + im_lanes[2]) - (im_lanes[1] + im_lanes[3]);
  for (; i < dim; ++i) {
    re += a[i].real() * b[i].real() + a[i].imag() * b[i].imag();
    im += a[i].real() * b[i].imag() - a[i].imag() * b[i].real();
  }
  return {re, im};
}

double norm2(std::span<const cplx> a) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 2 <= a.size(); i += 2) {
    const __m256d v = load2(a.data() + i);
    acc = _mm256_fmadd_pd(v, v, acc);
  }
  double s = hsum(acc);
  for (; i < a.size(); ++i) s += std::norm(a[i]);
  return s;
}

void probabilities(std::span<const cplx> a, std::span<double> out) {
  std::size_t i = 0;
  for (; i + 4 <= a.size(); i += 4) {
    const __m256d x = load2(a.data() + i);
    const __m256d y = load2(a.data() + i + 2);
    const __m256d h = _mm256_hadd_pd(_mm256_mul_pd(x, x), _mm256_mul_pd(y, y));
    _mm256_storeu_pd(out.data() + i, _mm256_permute4x64_pd(h, 0b11011000));
  }
  for (; i < a.size(); ++i) out[i] = std::norm(a[i]);
}

}  // namespace

const KernelTable table{&apply_1q, &apply_cz, &inner, &norm2, &probabilities};

}  // namespace cokern::simd::avx2
