#include "cokern/statevector.hpp"

#include <atomic>
#include <bit>
#include <cmath>
#include <numeric>

#include "cokern/simd.hpp"

namespace cokern {
namespace {

#ifdef NDEBUG
std::atomic<bool> g_validate{false};
#else
std::atomic<bool> g_validate{true};
#endif

void check_qubit(int q, int n) {
  if (q < 0 || q >= n) {
    throw ValidationError("qubit index " + std::to_string(q) + " out of range for n=" + std::to_string(n));
  }
}

}  // namespace

void set_gate_validation(bool enabled) { g_validate.store(enabled); }
bool gate_validation() { return g_validate.load(); }

QuantumState::QuantumState(int n, int cap) : n_(n) {
  if (n < 1 || n > cap) {
    throw ValidationError("qubit count " + std::to_string(n) + " outside [1, " + std::to_string(cap) + "]");
  }
  amps_.assign(std::size_t{1} << n, cplx{0.0});
  amps_[0] = 1.0;
}

void QuantumState::assign(std::vector<cplx> amps) {
  if (amps.size() != amps_.size()) {
    throw ValidationError("amplitude vector has length " + std::to_string(amps.size()) + ", expected " +
                          std::to_string(amps_.size()));
  }
  amps_ = std::move(amps);
}

QuantumState& QuantumState::apply_1q(int qubit, const Gate1Q& g) {
  check_qubit(qubit, n_);
  if (gate_validation() && !g.is_unitary(1e-9)) throw ValidationError("gate is not unitary within 1e-9");
  simd::kernels().apply_1q(amps_, std::size_t{1} << qubit, g);
  return *this;
}

QuantumState& QuantumState::apply_cz(int q1, int q2) {
  check_qubit(q1, n_);
  check_qubit(q2, n_);
  if (q1 == q2) throw ValidationError("CZ needs two distinct qubits");
  const std::size_t a = std::size_t{1} << q1, b = std::size_t{1} << q2;
  simd::kernels().apply_cz(amps_, std::min(a, b), std::max(a, b));
  return *this;
}

double QuantumState::norm2() const { return simd::kernels().norm2(amps_); }

QuantumState zero_state(int n, int cap) { return QuantumState(n, cap); }

QuantumState prepare_fiducial(const CouplingGraph& graph, double lambda) {
  QuantumState s(graph.num_vertices());
  const Gate1Q ry = gates::ry(lambda);
  for (int k = 0; k < graph.num_vertices(); ++k) s.apply_1q(k, ry);
  for (auto [a, b] : graph.edges()) s.apply_cz(a, b);
  return s;
}

cplx overlap(const QuantumState& a, const QuantumState& b) {
  if (a.num_qubits() != b.num_qubits()) {
    throw ValidationError("overlap of states with " + std::to_string(a.num_qubits()) + " and " +
                          std::to_string(b.num_qubits()) + " qubits");
  }
  return simd::kernels().inner(a.amplitudes(), b.amplitudes());
}

std::vector<double> outcome_distribution(const QuantumState& s) {
  std::vector<double> p(s.dim());
  simd::kernels().probabilities(s.amplitudes(), p);
  return p;
}

std::vector<double> hamming_weight_distribution(std::span<const double> p, int n) {
  if (n < 1 || n > 62 || p.size() != (std::size_t{1} << n)) {
    throw ValidationError("distribution length " + std::to_string(p.size()) + " does not match 2^" + std::to_string(n));
  }
  const double total = std::accumulate(p.begin(), p.end(), 0.0);
  if (std::abs(total - 1.0) > 1e-8) throw ValidationError("distribution sums to " + std::to_string(total));
  std::vector<double> w(static_cast<std::size_t>(n) + 1, 0.0);
  for (std::size_t i = 0; i < p.size(); ++i) w[static_cast<std::size_t>(std::popcount(i))] += p[i];
  return w;
}

}  // namespace cokern
