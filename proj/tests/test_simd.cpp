#include <doctest.h>

#include <algorithm>
#include <random>
#include <string>

#include "cokern/kernel.hpp"
#include "cokern/lce.hpp"
#include "cokern/simd.hpp"
#include "cokern/statevector.hpp"

using namespace cokern;

namespace {

std::vector<cplx> random_amps(std::size_t dim, std::mt19937_64& rng) {
  std::normal_distribution<double> N;
  std::vector<cplx> v(dim);
  for (auto& a : v) a = {N(rng), N(rng)};
  return v;
}

double max_diff(const std::vector<cplx>& a, const std::vector<cplx>& b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
  return d;
}

Gate1Q random_gate(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> U(-3.2, 3.2);
  return gates::rz(U(rng)) * gates::ry(U(rng)) * gates::rx(U(rng));
}

}  // namespace

TEST_CASE("scalar backend is always available") {
  CHECK(simd::backend_available(simd::Backend::kScalar));
  CHECK(simd::backend_name(simd::Backend::kScalar) == "scalar");
  const auto all = simd::available_backends();
  CHECK(std::find(all.begin(), all.end(), simd::Backend::kScalar) != all.end());
}

TEST_CASE("set_backend refuses unavailable backends") {
  for (auto b : {simd::Backend::kScalar, simd::Backend::kAvx2}) {
    if (simd::backend_available(b)) {
      simd::set_backend(b);
      CHECK(simd::active_backend() == b);
    } else {
      CHECK_THROWS_AS(simd::set_backend(b), ValidationError);
    }
  }
  simd::reset_backend();
}

TEST_CASE("vector kernels agree with the scalar reference") {
  std::mt19937_64 rng(11);
  const auto& ref = simd::scalar::table;
  for (auto b : simd::available_backends()) {
    const std::string name(simd::backend_name(b));
    CAPTURE(name);
    const auto& k = simd::kernels(b);
    for (int n = 1; n <= 10; ++n) {
      const std::size_t dim = std::size_t(1) << n;
      const auto base = random_amps(dim, rng);
      for (int q = 0; q < n; ++q) {
        const Gate1Q g = random_gate(rng);
        auto a = base, r = base;
        k.apply_1q(a, std::size_t(1) << q, g);
        ref.apply_1q(r, std::size_t(1) << q, g);
        CHECK(max_diff(a, r) <= 1e-12);
        for (int q2 = q + 1; q2 < n; ++q2) {
          auto c = base, rc = base;
          k.apply_cz(c, std::size_t(1) << q, std::size_t(1) << q2);
          ref.apply_cz(rc, std::size_t(1) << q, std::size_t(1) << q2);
          CHECK(max_diff(c, rc) == 0.0);
        }
      }
      const auto other = random_amps(dim, rng);
      CHECK(std::abs(k.inner(base, other) - ref.inner(base, other)) <= 1e-12 * double(dim));
      CHECK(std::abs(k.norm2(base) - ref.norm2(base)) <= 1e-12 * double(dim));
      std::vector<double> p(dim), pr(dim);
      k.probabilities(base, p);
      ref.probabilities(base, pr);
      for (std::size_t i = 0; i < dim; ++i) CHECK(std::abs(p[i] - pr[i]) <= 1e-14 * (1 + pr[i]));
    }
  }
}

TEST_CASE("kernel matrices do not depend on the backend") {
  const auto g = CouplingGraph::heavy_hex(7);
  const auto prob = new_problem(g, 12);
  const auto d = generate_dataset(prob, 4, 0.01, 13);
  KernelConfig cfg;
  cfg.lambda = {0.9};
  simd::set_backend(simd::Backend::kScalar);
  const auto ref = build_kernel_matrix(d, d, g, cfg);
  for (auto b : simd::available_backends()) {
    simd::set_backend(b);
    const auto K = build_kernel_matrix(d, d, g, cfg);
    CHECK((K.values - ref.values).cwiseAbs().maxCoeff() <= 1e-12);
  }
  simd::reset_backend();
}
