#pragma once

// Dense statevector simulation. Qubit k is bit k of the basis index
// (little-endian), shared by every module.

#include <span>
#include <vector>

#include "cokern/graph.hpp"
#include "cokern/types.hpp"

namespace cokern {

inline constexpr int kDefaultQubitCap = 24;

class QuantumState {
 public:
  /// |0^n>. Throws ValidationError unless 1 <= n <= cap.
  explicit QuantumState(int n, int cap = kDefaultQubitCap);

  int num_qubits() const { return n_; }
  std::size_t dim() const { return amps_.size(); }
  std::span<const cplx> amplitudes() const { return amps_; }
  std::span<cplx> amplitudes() { return amps_; }
  cplx operator[](std::size_t i) const { return amps_[i]; }

  /// Replaces the amplitudes; size must equal 2^n. No normalization check.
  void assign(std::vector<cplx> amps);

  /// Throws ValidationError on a bad index, or on a non-unitary gate when
  /// gate validation is enabled.
  QuantumState& apply_1q(int qubit, const Gate1Q& g);
  QuantumState& apply_cz(int q1, int q2);

  double norm2() const;

 private:
  int n_;
  std::vector<cplx> amps_;
};

QuantumState zero_state(int n, int cap = kDefaultQubitCap);

/// Unitarity of gates passed to apply_1q is checked (tolerance 1e-9) only
/// while validation is on. Defaults to on in debug builds.
void set_gate_validation(bool enabled);
bool gate_validation();

/// prod_{edges} CZ  prod_k RY(lambda) |0^n>
QuantumState prepare_fiducial(const CouplingGraph& graph, double lambda);

/// <a|b>. Throws ValidationError on a dimension mismatch.
cplx overlap(const QuantumState& a, const QuantumState& b);

std::vector<double> outcome_distribution(const QuantumState& s);

/// Buckets p by popcount of the outcome index. Throws ValidationError if
/// p.size() != 2^n or p does not sum to 1 within 1e-8.
std::vector<double> hamming_weight_distribution(std::span<const double> p, int n);

}  // namespace cokern
