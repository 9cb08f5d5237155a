#include "cokern/group.hpp"

#include <cmath>
#include <numbers>

namespace cokern {

namespace {
constexpr double kPi = std::numbers::pi;
}

Gate1Q euler_to_unitary(const EulerTriple& e) {
  if (!std::isfinite(e.theta1) || !std::isfinite(e.theta2) || !std::isfinite(e.theta3)) {
    throw ValidationError("Euler angles must be finite");
  }
  return gates::rx(e.theta1) * gates::rz(e.theta2) * gates::rx(e.theta3);
}

double canonical_angle(double a) {
  double r = std::fmod(a, 4 * kPi);
  if (r > 2 * kPi) r -= 4 * kPi;
  if (r <= -2 * kPi) r += 4 * kPi;
  return r;
}

std::vector<Gate1Q> datum_to_unitaries(std::span<const double> theta) {
  if (theta.size() % 2 != 0) throw ValidationError("angle vector has odd length " + std::to_string(theta.size()));
  std::vector<Gate1Q> out;
  out.reserve(theta.size() / 2);
  for (std::size_t k = 0; k < theta.size(); k += 2) out.push_back(euler_to_unitary({theta[k], theta[k + 1], 0.0}));
  return out;
}

// ---------------------------------------------------------------- Paulis

char pauli_char(Pauli p) { return "IXYZ"[static_cast<int>(p)]; }

Pauli pauli_from_char(char c) {
  switch (c) {
    case 'I':
      return Pauli::I;
    case 'X':
      return Pauli::X;
    case 'Y':
      return Pauli::Y;
    case 'Z':
      return Pauli::Z;
    default:
      throw ValidationError(std::string("invalid Pauli letter '") + c + "'");
  }
}

Gate1Q pauli_gate(Pauli p) {
  switch (p) {
    case Pauli::I:
      return Gate1Q::identity();
    case Pauli::X:
      return gates::pauli_x();
    case Pauli::Y:
      return gates::pauli_y();
    case Pauli::Z:
      return gates::pauli_z();
  }
  throw ValidationError("invalid Pauli letter");
}

namespace {

// Symplectic bits: x for X/Y, z for Z/Y.
bool x_bit(Pauli p) { return p == Pauli::X || p == Pauli::Y; }
bool z_bit(Pauli p) { return p == Pauli::Z || p == Pauli::Y; }

// P_a * P_b = i^phase * P_c
std::pair<Pauli, int> letter_product(Pauli a, Pauli b) {
  if (a == Pauli::I) return {b, 0};
  if (b == Pauli::I) return {a, 0};
  if (a == b) return {Pauli::I, 0};
  // X -> Y -> Z -> X is the cyclic order with XY = iZ.
  const int ia = static_cast<int>(a), ib = static_cast<int>(b);
  const Pauli c = static_cast<Pauli>(6 - ia - ib);
  const bool cyclic = (ia % 3) + 1 == ib;
  return {c, cyclic ? 1 : 3};
}

}  // namespace

PauliString::PauliString(std::vector<Pauli> letters, int phase) : letters_(std::move(letters)), phase_(phase) {
  if (phase < 0 || phase > 3) throw ValidationError("Pauli phase exponent must be in {0,1,2,3}");
}

PauliString PauliString::parse(const std::string& letters, int phase) {
  std::vector<Pauli> v;
  v.reserve(letters.size());
  for (char c : letters) v.push_back(pauli_from_char(c));
  return PauliString(std::move(v), phase);
}

bool PauliString::is_identity_letters() const {
  for (auto p : letters_)
    if (p != Pauli::I) return false;
  return true;
}

bool PauliString::commutes_with(const PauliString& other) const {
  if (other.size() != size()) throw ValidationError("Pauli strings of different length");
  int parity = 0;
  for (std::size_t k = 0; k < letters_.size(); ++k) {
    parity ^= (x_bit(letters_[k]) & z_bit(other.letters_[k])) ^ (z_bit(letters_[k]) & x_bit(other.letters_[k]));
  }
  return parity == 0;
}

void PauliString::apply_to(QuantumState& s) const {
  if (s.num_qubits() != size()) throw ValidationError("Pauli string length does not match state");
  for (int k = 0; k < size(); ++k) {
    if ((*this)[k] != Pauli::I) s.apply_1q(k, pauli_gate((*this)[k]));
  }
  static const cplx kPhase[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
  if (phase_ != 0)
    for (auto& a : s.amplitudes()) a *= kPhase[phase_];
}

std::string PauliString::to_string() const {
  static const char* kPrefix[4] = {"+", "i", "-", "-i"};
  std::string out = kPrefix[phase_];
  for (auto p : letters_) out.push_back(pauli_char(p));
  return out;
}

PauliString pauli_multiply(const PauliString& a, const PauliString& b) {
  if (a.size() != b.size()) {
    throw ValidationError("Pauli strings of length " + std::to_string(a.size()) + " and " + std::to_string(b.size()));
  }
  std::vector<Pauli> out(static_cast<std::size_t>(a.size()));
  int phase = a.phase() + b.phase();
  for (int k = 0; k < a.size(); ++k) {
    auto [c, ph] = letter_product(a[k], b[k]);
    out[static_cast<std::size_t>(k)] = c;
    phase += ph;
  }
  return PauliString(std::move(out), phase % 4);
}

// ---------------------------------------------------------- stabilizers

PauliString StabilizerGroup::element(std::uint64_t subset) const {
  PauliString acc = PauliString::identity(num_qubits());
  for (std::size_t i = 0; i < generators.size(); ++i) {
    if ((subset >> i) & 1U) acc = acc * generators[i];
  }
  return acc;
}

int StabilizerGroup::symplectic_rank() const {
  const int n = num_qubits();
  // Rows are 2n-bit vectors (x bits low, z bits high); n <= 32 fits in 64 bits.
  std::vector<std::uint64_t> rows;
  for (const auto& g : generators) {
    std::uint64_t r = 0;
    for (int k = 0; k < n; ++k) {
      if (x_bit(g[k])) r |= std::uint64_t{1} << k;
      if (z_bit(g[k])) r |= std::uint64_t{1} << (n + k);
    }
    rows.push_back(r);
  }
  int rank = 0;
  for (int bit = 0; bit < 2 * n && rank < static_cast<int>(rows.size()); ++bit) {
    const std::uint64_t m = std::uint64_t{1} << bit;
    std::size_t pivot = static_cast<std::size_t>(rank);
    while (pivot < rows.size() && !(rows[pivot] & m)) ++pivot;
    if (pivot == rows.size()) continue;
    std::swap(rows[pivot], rows[static_cast<std::size_t>(rank)]);
    for (std::size_t r = 0; r < rows.size(); ++r) {
      if (r != static_cast<std::size_t>(rank) && (rows[r] & m)) rows[r] ^= rows[static_cast<std::size_t>(rank)];
    }
    ++rank;
  }
  return rank;
}

StabilizerGroup graph_stabilizer_generators(const CouplingGraph& graph) {
  const int n = graph.num_vertices();
  if (n > 32) throw ValidationError("stabilizer groups are limited to 32 qubits");
  StabilizerGroup s{{}, graph};
  for (int i = 0; i < n; ++i) {
    std::vector<Pauli> letters(static_cast<std::size_t>(n), Pauli::I);
    letters[static_cast<std::size_t>(i)] = Pauli::X;
    for (int k : graph.neighbors(i)) letters[static_cast<std::size_t>(k)] = Pauli::Z;
    s.generators.emplace_back(std::move(letters));
  }
  return s;
}

PauliString sample_stabilizer_element(const StabilizerGroup& s, Rng& rng) {
  const auto n = s.generators.size();
  const std::uint64_t mask = n >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << n) - 1;
  return s.element(rng() & mask);
}

std::pair<double, double> compose_euler_with_pauli(std::pair<double, double> angles, Pauli p) {
  auto [t1, t2] = angles;
  // RZ(t) X = X RZ(-t), RX(pi) = -iX, RZ(pi) = -iZ, Y = iXZ.
  switch (p) {
    case Pauli::I:
      break;
    case Pauli::X:
      t1 += kPi;
      t2 = -t2;
      break;
    case Pauli::Z:
      t2 += kPi;
      break;
    case Pauli::Y:
      t1 += kPi;
      t2 = -t2 - kPi;
      break;
    default:
      throw ValidationError("invalid Pauli letter");
  }
  return {canonical_angle(t1), canonical_angle(t2)};
}

// ------------------------------------------------------------- Z*_p

bool is_prime(std::uint64_t p) {
  if (p < 2) return false;
  for (std::uint64_t d = 2; d * d <= p; ++d)
    if (p % d == 0) return false;
  return true;
}

std::uint64_t ZpStarGroup::pow(std::uint64_t base, std::uint64_t e) const {
  std::uint64_t r = 1 % p_, b = base % p_;
  while (e) {
    if (e & 1U) r = mul(r, b);
    b = mul(b, b);
    e >>= 1;
  }
  return r;
}

ZpStarGroup::ZpStarGroup(std::uint64_t p, std::uint64_t g, int k) : p_(p), g_(g), k_(k) {
  if (p > (std::uint64_t{1} << 31)) throw ValidationError("p too large for brute-force group checks");
  if (!is_prime(p) || p < 3) throw ValidationError(std::to_string(p) + " is not an odd prime");
  if (g == 0 || g >= p) throw ValidationError("generator must lie in [1, p)");
  std::uint64_t x = g, order = 1;
  while (x != 1) {
    x = mul(x, g);
    ++order;
  }
  if (order != p - 1) {
    throw ValidationError(std::to_string(g) + " has order " + std::to_string(order) + " and does not generate Z*_" +
                          std::to_string(p));
  }
  if (k < 0 || k > 30 || (std::uint64_t{1} << k) >= p - 1) {
    throw ValidationError("subset exponent k=" + std::to_string(k) + " needs 2^k < p - 1");
  }
  subset_.reserve(std::size_t{1} << k);
  std::uint64_t gv = 1;
  for (std::uint64_t v = 0; v < (std::uint64_t{1} << k); ++v) {
    subset_.push_back(gv);
    gv = mul(gv, g);
  }
}

void ZpStarGroup::check_element(std::uint64_t x) const {
  if (x == 0 || x >= p_) throw ValidationError(std::to_string(x) + " is not an element of Z*_" + std::to_string(p_));
}

double dlog_kernel_entry(const ZpStarGroup& grp, std::uint64_t x, std::uint64_t z) {
  grp.check_element(x);
  grp.check_element(z);
  std::vector<bool> in_x(grp.p(), false);
  for (auto s : grp.subset()) in_x[grp.mul(x, s)] = true;
  std::size_t common = 0;
  for (auto s : grp.subset()) common += in_x[grp.mul(z, s)] ? 1 : 0;
  const double frac = static_cast<double>(common) / static_cast<double>(grp.subset().size());
  return frac * frac;
}

std::uint64_t dlog_brute(const ZpStarGroup& grp, std::uint64_t x) {
  if (grp.p() > (std::uint64_t{1} << 20)) throw ValidationError("brute-force DLOG limited to p <= 2^20");
  grp.check_element(x);
  std::uint64_t acc = 1;
  for (std::uint64_t v = 0; v < grp.order(); ++v) {
    if (acc == x) return v;
    acc = grp.mul(acc, grp.generator());
  }
  throw ValidationError(std::to_string(x) + " is not in the group generated by " + std::to_string(grp.generator()));
}

}  // namespace cokern
