#include <doctest.h>

#include <random>

#include "cokern/fourier.hpp"
#include "cokern/group.hpp"
#include "cokern/types.hpp"

using namespace cokern;

namespace {

Eigen::VectorXcd random_state(int d, std::mt19937_64& rng) {
  std::normal_distribution<double> N;
  Eigen::VectorXcd v(d);
  for (int i = 0; i < d; ++i) v(i) = {N(rng), N(rng)};
  return v.normalized();
}

std::vector<FiniteGroupModel> models() {
  return {cyclic_group_model(1), cyclic_group_model(2), cyclic_group_model(5), cyclic_group_model(8),
          zp_star_group_model(ZpStarGroup(7, 3, 1)), zp_star_group_model(ZpStarGroup(11, 2, 2))};
}

}  // namespace

TEST_CASE("built-in models validate") {
  for (const auto& gm : models()) {
    CAPTURE(gm.name);
    CHECK_NOTHROW(gm.validate());
    CHECK(gm.num_irreps() == gm.order());
    for (int g = 0; g < gm.order(); ++g) CHECK(gm.mult[static_cast<std::size_t>(g)][static_cast<std::size_t>(gm.inverse(g))] == gm.identity);
  }
  CHECK_THROWS_AS(cyclic_group_model(0), ValidationError);
  CHECK_THROWS_AS(cyclic_group_model(65), ValidationError);
}

TEST_CASE("Z2 character table") {
  const auto gm = cyclic_group_model(2);
  CHECK(std::abs(gm.characters(0, 0) - 1.0) < 1e-15);
  CHECK(std::abs(gm.characters(0, 1) - 1.0) < 1e-15);
  CHECK(std::abs(gm.characters(1, 0) - 1.0) < 1e-15);
  CHECK(std::abs(gm.characters(1, 1) + 1.0) < 1e-15);
}

TEST_CASE("isotypic projectors") {
  for (const auto& gm : models()) {
    CAPTURE(gm.name);
    const int d2 = gm.rep_dim() * gm.rep_dim();
    Eigen::MatrixXcd sum = Eigen::MatrixXcd::Zero(d2, d2);
    std::vector<Eigen::MatrixXcd> P;
    for (int J = 0; J < gm.num_irreps(); ++J) {
      P.push_back(irrep_projector(gm, J));
      CHECK((P.back() * P.back() - P.back()).cwiseAbs().maxCoeff() < 1e-12);
      CHECK((P.back().adjoint() - P.back()).cwiseAbs().maxCoeff() < 1e-12);
      sum += P.back();
    }
    CHECK((sum - Eigen::MatrixXcd::Identity(d2, d2)).cwiseAbs().maxCoeff() < 1e-12);
    for (std::size_t a = 0; a < P.size(); ++a)
      for (std::size_t b = a + 1; b < P.size(); ++b) CHECK((P[a] * P[b]).cwiseAbs().maxCoeff() < 1e-12);
    // The trivial irrep projects onto vectors fixed by every D_g (x) conj(D_g).
    for (int g = 0; g < gm.order(); ++g) {
      const auto& D = gm.rep[static_cast<std::size_t>(g)];
      const Eigen::Index d = D.rows();
      Eigen::MatrixXcd W(d * d, d * d);
      for (Eigen::Index i = 0; i < d; ++i)
        for (Eigen::Index j = 0; j < d; ++j) W.block(i * d, j * d, d, d) = D(i, j) * D.conjugate();
      CHECK((W * P[0] - P[0]).cwiseAbs().maxCoeff() < 1e-12);
    }
    CHECK_THROWS_AS(irrep_projector(gm, -1), ValidationError);
    CHECK_THROWS_AS(irrep_projector(gm, gm.num_irreps()), ValidationError);
  }
}

TEST_CASE("Fourier coefficients and inversion") {
  std::mt19937_64 rng(1);
  for (const auto& gm : models()) {
    CAPTURE(gm.name);
    for (int t = 0; t < 3; ++t) {
      const auto psi = random_state(gm.rep_dim(), rng);
      const auto coeffs = kernel_fourier_coefficients(gm, psi);
      const auto direct = kernel_function_direct(gm, psi);
      const auto inverted = fourier_invert(coeffs, gm);
      const auto scalar = scalar_fourier_transform(gm, direct);
      REQUIRE(inverted.size() == direct.size());
      for (std::size_t g = 0; g < direct.size(); ++g) CHECK(std::abs(inverted[g] - direct[g]) < 1e-10);
      CHECK(direct[static_cast<std::size_t>(gm.identity)] == doctest::Approx(1.0));
      for (int J = 0; J < gm.num_irreps(); ++J) {
        const auto& c = coeffs[static_cast<std::size_t>(J)];
        CHECK((c - c.adjoint()).cwiseAbs().maxCoeff() < 1e-12);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(c);
        CHECK(es.eigenvalues().minCoeff() >= -1e-10);
        // Sum_g l(g) chi_J(g) equals the trace of the coefficient.
        CHECK(std::abs(scalar[static_cast<std::size_t>(J)] - c.trace()) < 1e-10);
      }
    }
  }
}

TEST_CASE("uniform superposition has a flat kernel") {
  const auto gm = cyclic_group_model(5);
  const Eigen::VectorXcd u = Eigen::VectorXcd::Constant(5, 1.0 / std::sqrt(5.0));
  for (double v : kernel_function_direct(gm, u)) CHECK(v == doctest::Approx(1.0));
  const auto coeffs = kernel_fourier_coefficients(gm, u);
  CHECK(coeffs[0].trace().real() == doctest::Approx(5.0));
  for (int J = 1; J < 5; ++J) CHECK(coeffs[static_cast<std::size_t>(J)].cwiseAbs().maxCoeff() < 1e-12);
  std::vector<Eigen::MatrixXcd> zero(5, Eigen::MatrixXcd::Zero(25, 25));
  for (double v : fourier_invert(zero, gm)) CHECK(v == 0.0);
}

TEST_CASE("subset fiducial reproduces the discrete-log kernel") {
  const ZpStarGroup grp(7, 3, 1);
  const auto gm = zp_star_group_model(grp);
  const auto psi = subset_fiducial(grp);
  CHECK(psi.norm() == doctest::Approx(1.0));
  const auto l = kernel_function_direct(gm, psi);
  CHECK(l[2] == doctest::Approx(0.25));
  const auto back = fourier_invert(kernel_fourier_coefficients(gm, psi), gm);
  for (std::uint64_t x = 1; x < 7; ++x) {
    CHECK(l[x - 1] == doctest::Approx(dlog_kernel_entry(grp, x, 1)));
    CHECK(back[x - 1] == doctest::Approx(l[x - 1]));
  }
  const ZpStarGroup big(11, 2, 2);
  const auto l11 = kernel_function_direct(zp_star_group_model(big), subset_fiducial(big));
  for (std::uint64_t x = 1; x < 11; ++x) CHECK(l11[x - 1] == doctest::Approx(dlog_kernel_entry(big, x, 1)));
}

TEST_CASE("validation errors") {
  auto gm = cyclic_group_model(3);
  CHECK_THROWS_AS(kernel_fourier_coefficients(gm, Eigen::VectorXcd::Zero(3)), ValidationError);
  CHECK_THROWS_AS(kernel_fourier_coefficients(gm, Eigen::VectorXcd::Constant(2, 1.0 / std::sqrt(2.0))), ValidationError);
  CHECK_THROWS_AS(fourier_invert({}, gm), ValidationError);
  CHECK_THROWS_AS(scalar_fourier_transform(gm, {1.0}), ValidationError);
  auto bad = gm;
  bad.mult[1][1] = 1;
  CHECK_THROWS_AS(bad.validate(), ValidationError);
  bad = gm;
  bad.characters(1, 1) *= 2.0;
  CHECK_THROWS_AS(bad.validate(), ValidationError);
  bad = gm;
  bad.rep[1] = bad.rep[2];
  CHECK_THROWS_AS(bad.validate(), ValidationError);
  bad = gm;
  bad.rep.pop_back();
  CHECK_THROWS_AS(bad.validate(), ValidationError);
}
