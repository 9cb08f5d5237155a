#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "cokern/graph.hpp"
#include "cokern/rng.hpp"
#include "cokern/statevector.hpp"
#include "cokern/types.hpp"

namespace cokern {

// ---------------------------------------------------------------- SU(2)

/// D(t1, t2, t3) = exp(-i t1/2 X) exp(-i t2/2 Z) exp(-i t3/2 X)
struct EulerTriple {
  double theta1 = 0.0;
  double theta2 = 0.0;
  double theta3 = 0.0;
};

/// Throws ValidationError on non-finite angles.
Gate1Q euler_to_unitary(const EulerTriple& e);

/// Maps an angle into (-2pi, 2pi]. Single-qubit rotations are 4pi-periodic,
/// so this never changes the represented unitary.
double canonical_angle(double a);

/// Per-qubit gates of the product representation: qubit k gets
/// D(theta[2k], theta[2k+1], 0). Throws ValidationError on odd length.
std::vector<Gate1Q> datum_to_unitaries(std::span<const double> theta);

// ---------------------------------------------------------------- Paulis

enum class Pauli : std::uint8_t { I = 0, X = 1, Y = 2, Z = 3 };

char pauli_char(Pauli p);
/// Accepts I, X, Y, Z (upper case). Throws ValidationError otherwise.
Pauli pauli_from_char(char c);
Gate1Q pauli_gate(Pauli p);

/// n-qubit Pauli operator i^phase * P_0 (x) ... (x) P_{n-1}.
class PauliString {
 public:
  PauliString() = default;
  explicit PauliString(std::vector<Pauli> letters, int phase = 0);
  static PauliString identity(int n) { return PauliString(std::vector<Pauli>(static_cast<std::size_t>(n), Pauli::I)); }
  /// "XZI" style, qubit 0 first.
  static PauliString parse(const std::string& letters, int phase = 0);

  int size() const { return static_cast<int>(letters_.size()); }
  Pauli operator[](int k) const { return letters_[static_cast<std::size_t>(k)]; }
  const std::vector<Pauli>& letters() const { return letters_; }
  /// Exponent of i in {0, 1, 2, 3}.
  int phase() const { return phase_; }
  bool is_identity_letters() const;

  bool commutes_with(const PauliString& other) const;
  /// Applies the operator, phase included, to a state.
  void apply_to(QuantumState& s) const;
  /// Letters only, e.g. "ZXZ"; phase prefixed as "+", "i", "-", "-i".
  std::string to_string() const;

  friend bool operator==(const PauliString&, const PauliString&) = default;

 private:
  std::vector<Pauli> letters_;
  int phase_ = 0;
};

/// Letterwise product with phase tracking. Throws ValidationError on a length mismatch.
PauliString pauli_multiply(const PauliString& a, const PauliString& b);
inline PauliString operator*(const PauliString& a, const PauliString& b) { return pauli_multiply(a, b); }

// ---------------------------------------------------------- stabilizers

struct StabilizerGroup {
  std::vector<PauliString> generators;
  CouplingGraph graph;

  int num_qubits() const { return graph.num_vertices(); }
  /// Product of the generators selected by the low bits of `subset`.
  PauliString element(std::uint64_t subset) const;
  /// GF(2) rank of the generators' symplectic vectors.
  int symplectic_rank() const;
};

/// Generator i is X on vertex i and Z on each neighbour of i.
StabilizerGroup graph_stabilizer_generators(const CouplingGraph& graph);

/// Uniform over the 2^n group elements (independent generators).
PauliString sample_stabilizer_element(const StabilizerGroup& s, Rng& rng);

/// Angles (t1', t2') with D(t1', t2', 0) equal to D(t1, t2, 0) * P up to a
/// global phase. Outputs are canonicalized.
std::pair<double, double> compose_euler_with_pauli(std::pair<double, double> angles, Pauli p);

// ------------------------------------------------------------- Z*_p

/// Multiplicative group mod a prime p with a verified generator g and the
/// subset {g^v : 0 <= v < 2^k} used by the subset-state fiducial.
class ZpStarGroup {
 public:
  /// Throws ValidationError if p is not prime, g does not generate Z*_p, or 2^k >= p - 1.
  ZpStarGroup(std::uint64_t p, std::uint64_t g, int k);

  std::uint64_t p() const { return p_; }
  std::uint64_t generator() const { return g_; }
  int k() const { return k_; }
  std::uint64_t order() const { return p_ - 1; }
  const std::vector<std::uint64_t>& subset() const { return subset_; }

  std::uint64_t mul(std::uint64_t a, std::uint64_t b) const { return (a * b) % p_; }
  std::uint64_t pow(std::uint64_t base, std::uint64_t e) const;
  /// Throws ValidationError unless 1 <= x < p.
  void check_element(std::uint64_t x) const;

 private:
  std::uint64_t p_;
  std::uint64_t g_;
  int k_;
  std::vector<std::uint64_t> subset_;
};

bool is_prime(std::uint64_t p);

/// (|xS n zS| / 2^k)^2 by explicit subset construction.
double dlog_kernel_entry(const ZpStarGroup& grp, std::uint64_t x, std::uint64_t z);

/// Exhaustive search for v in [0, p-1) with g^v = x (mod p). Requires p <= 2^20.
std::uint64_t dlog_brute(const ZpStarGroup& grp, std::uint64_t x);

}  // namespace cokern
