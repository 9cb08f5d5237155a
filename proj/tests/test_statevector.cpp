#include <doctest.h>

#include <algorithm>
#include <numeric>
#include <random>

#include "cokern/graph.hpp"
#include "cokern/group.hpp"
#include "cokern/statevector.hpp"
#include "oracles.hpp"

using namespace cokern;
using oracle::kPi;

namespace {

oracle::Vec to_vec(const QuantumState& s) {
  oracle::Vec v(static_cast<Eigen::Index>(s.dim()));
  for (std::size_t i = 0; i < s.dim(); ++i) v(static_cast<Eigen::Index>(i)) = s[i];
  return v;
}

oracle::Mat to_mat(const Gate1Q& g) {
  oracle::Mat m(2, 2);
  m << g(0, 0), g(0, 1), g(1, 0), g(1, 1);
  return m;
}

double max_diff(const QuantumState& a, const QuantumState& b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.dim(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
  return d;
}

Gate1Q random_gate(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> U(-kPi, kPi);
  return gates::rz(U(rng)) * gates::ry(U(rng)) * gates::rx(U(rng));
}

}  // namespace

TEST_CASE("zero_state") {
  const auto s1 = zero_state(1);
  CHECK(s1.dim() == 2);
  CHECK(s1[0] == cplx(1.0));
  CHECK(s1[1] == cplx(0.0));
  const auto s2 = zero_state(2);
  CHECK(s2.dim() == 4);
  CHECK(s2[0] == cplx(1.0));
  for (std::size_t i = 1; i < 4; ++i) CHECK(s2[i] == cplx(0.0));
  CHECK_THROWS_AS(zero_state(25), ValidationError);
  CHECK_THROWS_AS(zero_state(0), ValidationError);
  CHECK_NOTHROW(zero_state(25, 26));
}

TEST_CASE("rotation gates match the matrix exponential") {
  for (double phi : {0.0, 0.3, -1.7, kPi, 5.0}) {
    CHECK((to_mat(gates::rx(phi)) - oracle::rotation('X', phi)).cwiseAbs().maxCoeff() < 1e-12);
    CHECK((to_mat(gates::ry(phi)) - oracle::rotation('Y', phi)).cwiseAbs().maxCoeff() < 1e-12);
    CHECK((to_mat(gates::rz(phi)) - oracle::rotation('Z', phi)).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("apply_1q") {
  SUBCASE("RY(pi)|0> = |1>") {
    QuantumState s(1);
    s.apply_1q(0, gates::ry(kPi));
    CHECK(std::abs(s[0]) < 1e-15);
    CHECK(std::abs(s[1] - cplx(1.0)) < 1e-15);
  }
  SUBCASE("RX(0) leaves any state alone") {
    std::mt19937_64 rng(1);
    QuantumState s(3);
    for (int q = 0; q < 3; ++q) s.apply_1q(q, random_gate(rng));
    const QuantumState before = s;
    s.apply_1q(1, gates::rx(0.0));
    CHECK(max_diff(s, before) == 0.0);
  }
  SUBCASE("RZ(pi/2) on |+>") {
    QuantumState s(1);
    s.apply_1q(0, gates::hadamard());
    s.apply_1q(0, gates::rz(kPi / 2));
    oracle::Vec plus(2);
    plus << 1 / std::sqrt(2.0), 1 / std::sqrt(2.0);
    const oracle::Vec out = oracle::rotation('Z', kPi / 2) * plus;
    CHECK(std::abs(plus.dot(out) - std::cos(kPi / 4)) < 1e-12);
    CHECK(std::abs(plus.dot(to_vec(s)) - std::cos(kPi / 4)) < 1e-12);
  }
  SUBCASE("matches dense kron on every qubit") {
    std::mt19937_64 rng(2);
    const int n = 4;
    QuantumState s(n);
    oracle::Vec v = oracle::basis(16, 0);
    for (int step = 0; step < 12; ++step) {
      const int q = step % n;
      const Gate1Q g = random_gate(rng);
      s.apply_1q(q, g);
      std::vector<oracle::Mat> ops(n, oracle::Mat::Identity(2, 2));
      ops[static_cast<std::size_t>(q)] = to_mat(g);
      v = oracle::tensor(ops) * v;
    }
    CHECK((to_vec(s) - v).cwiseAbs().maxCoeff() < 1e-12);
  }
  SUBCASE("errors") {
    QuantumState s(2);
    CHECK_THROWS_AS(s.apply_1q(2, gates::hadamard()), ValidationError);
    CHECK_THROWS_AS(s.apply_1q(-1, gates::hadamard()), ValidationError);
    const bool prev = gate_validation();
    set_gate_validation(true);
    CHECK_THROWS_AS(s.apply_1q(0, Gate1Q::from(1.0, 0.0, 0.0, 1.0 + 1e-6)), ValidationError);
    CHECK_NOTHROW(s.apply_1q(0, Gate1Q::from(1.0, 0.0, 0.0, 1.0 + 1e-11)));
    set_gate_validation(prev);
  }
}

TEST_CASE("apply_cz") {
  QuantumState s(2);
  s.assign({0, 0, 0, 1});
  s.apply_cz(0, 1);
  CHECK(s[3] == cplx(-1.0));
  QuantumState z(2);
  z.apply_cz(1, 0);
  CHECK(z[0] == cplx(1.0));

  std::mt19937_64 rng(3);
  QuantumState r(4);
  for (int q = 0; q < 4; ++q) r.apply_1q(q, random_gate(rng));
  const QuantumState before = r;
  r.apply_cz(1, 3).apply_cz(1, 3);
  CHECK(max_diff(r, before) == 0.0);
  r.apply_cz(3, 1);
  CHECK((to_vec(r) - oracle::cz(4, 1, 3) * to_vec(before)).cwiseAbs().maxCoeff() == 0.0);

  CHECK_THROWS_AS(r.apply_cz(2, 2), ValidationError);
  CHECK_THROWS_AS(r.apply_cz(0, 4), ValidationError);
}

TEST_CASE("prepare_fiducial") {
  SUBCASE("lambda = 0 gives |0^n>") {
    for (const auto& g : {CouplingGraph::path(4), CouplingGraph::ring(5), CouplingGraph::heavy_hex(7)}) {
      const auto s = prepare_fiducial(g, 0.0);
      CHECK(s[0] == cplx(1.0));
      CHECK(std::abs(s.norm2() - 1.0) < 1e-15);
    }
  }
  SUBCASE("single edge at pi/2") {
    const auto s = prepare_fiducial(CouplingGraph(2, {{0, 1}}), kPi / 2);
    const double expect[] = {0.5, 0.5, 0.5, -0.5};
    for (std::size_t i = 0; i < 4; ++i) CHECK(std::abs(s[i] - cplx(expect[i])) < 1e-15);
    const auto p = outcome_distribution(s);
    for (double v : p) CHECK(std::abs(v - 0.25) < 1e-15);
  }
  SUBCASE("matches the dense construction") {
    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> U(0, 2 * kPi);
    for (const auto& g : {CouplingGraph::path(5), CouplingGraph::ring(4), CouplingGraph::heavy_hex(6)}) {
      const double lam = U(rng);
      std::vector<std::pair<int, int>> e(g.edges().begin(), g.edges().end());
      CHECK((to_vec(prepare_fiducial(g, lam)) - oracle::fiducial(g.num_vertices(), e, lam)).cwiseAbs().maxCoeff() <
            1e-12);
    }
  }
  SUBCASE("graph stabilizers fix the graph state") {
    for (const auto& g : {CouplingGraph::path(5), CouplingGraph::ring(6), CouplingGraph::heavy_hex(8)}) {
      const int n = g.num_vertices();
      const auto psi = to_vec(prepare_fiducial(g, kPi / 2));
      for (int i = 0; i < n; ++i) {
        std::string letters(static_cast<std::size_t>(n), 'I');
        letters[static_cast<std::size_t>(i)] = 'X';
        for (int k : g.neighbors(i)) letters[static_cast<std::size_t>(k)] = 'Z';
        CHECK((oracle::pauli_string(letters) * psi - psi).cwiseAbs().maxCoeff() < 1e-10);
      }
    }
  }
  SUBCASE("CZ order does not matter") {
    const auto g = CouplingGraph::heavy_hex(9);
    const double lam = 1.1;
    auto edges = g.edges();
    std::mt19937_64 rng(5);
    for (int t = 0; t < 5; ++t) {
      std::shuffle(edges.begin(), edges.end(), rng);
      QuantumState s(g.num_vertices());
      for (int q = 0; q < g.num_vertices(); ++q) s.apply_1q(q, gates::ry(lam));
      for (auto [a, b] : edges) s.apply_cz(b, a);
      CHECK(max_diff(s, prepare_fiducial(g, lam)) <= 1e-12);
    }
  }
}

TEST_CASE("overlap") {
  QuantumState x(3);
  std::mt19937_64 rng(6);
  for (int q = 0; q < 3; ++q) x.apply_1q(q, random_gate(rng));
  CHECK(std::abs(overlap(x, x) - cplx(1.0)) < 1e-12);
  QuantumState zero(1), one(1), plus(1);
  one.apply_1q(0, gates::pauli_x());
  plus.apply_1q(0, gates::hadamard());
  CHECK(std::abs(overlap(zero, one)) == 0.0);
  CHECK(std::abs(overlap(zero, plus) - 1 / std::sqrt(2.0)) < 1e-15);
  CHECK_THROWS_AS(overlap(zero, x), ValidationError);
}

TEST_CASE("outcome and Hamming-weight distributions") {
  const auto p0 = outcome_distribution(zero_state(3));
  CHECK(p0[0] == 1.0);
  CHECK(std::accumulate(p0.begin(), p0.end(), 0.0) == 1.0);
  QuantumState plus(1);
  plus.apply_1q(0, gates::hadamard());
  const auto pp = outcome_distribution(plus);
  CHECK(std::abs(pp[0] - 0.5) < 1e-15);
  CHECK(std::abs(pp[1] - 0.5) < 1e-15);

  const std::vector<double> e0{1, 0, 0, 0};
  CHECK(hamming_weight_distribution(e0, 2) == std::vector<double>{1, 0, 0});
  const std::vector<double> uni(4, 0.25);
  CHECK(hamming_weight_distribution(uni, 2) == std::vector<double>{0.25, 0.5, 0.25});
  CHECK_THROWS_AS(hamming_weight_distribution(uni, 3), ValidationError);
  CHECK_THROWS_AS(hamming_weight_distribution(std::vector<double>{0.5, 0.2, 0.1, 0.1}, 2), ValidationError);

  std::mt19937_64 rng(7);
  QuantumState s(5);
  for (int q = 0; q < 5; ++q) s.apply_1q(q, random_gate(rng));
  s.apply_cz(0, 3);
  const auto p = outcome_distribution(s);
  const auto h = hamming_weight_distribution(p, 5);
  CHECK(h[0] == p[0]);
  CHECK(std::abs(std::accumulate(h.begin(), h.end(), 0.0) - 1.0) < 1e-12);
}

TEST_CASE("norm preservation and reversibility over random circuits") {
  std::mt19937_64 rng(8);
  for (int n : {1, 3, 6, 9}) {
    QuantumState s(n);
    std::uniform_int_distribution<int> Q(0, n - 1);
    std::vector<std::pair<int, Gate1Q>> applied;
    for (int t = 0; t < 40; ++t) {
      const int q = Q(rng);
      const Gate1Q g = random_gate(rng);
      s.apply_1q(q, g);
      applied.emplace_back(q, g);
      if (n > 1) {
        const int a = Q(rng), b = (a + 1 + Q(rng) % (n - 1)) % n;
        s.apply_cz(a, b);
        s.apply_cz(a, b);
      }
    }
    CHECK(std::abs(s.norm2() - 1.0) < 1e-10);
    QuantumState back = s;
    for (auto it = applied.rbegin(); it != applied.rend(); ++it) back.apply_1q(it->first, it->second.adjoint());
    CHECK(max_diff(back, zero_state(n)) < 1e-10);
  }
}
