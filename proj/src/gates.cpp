#include <algorithm>
#include <cmath>

#include "cokern/types.hpp"

namespace cokern {

double Gate1Q::unitarity_error() const {
  const Gate1Q p = adjoint() * *this;
  return std::max({std::abs(p.m[0] - 1.0), std::abs(p.m[1]), std::abs(p.m[2]), std::abs(p.m[3] - 1.0)});
}

double phase_free_overlap(const Gate1Q& a, const Gate1Q& b) { return std::abs((a.adjoint() * b).trace()); }

namespace gates {

constexpr cplx kI{0.0, 1.0};

Gate1Q pauli_x() { return Gate1Q::from(0.0, 1.0, 1.0, 0.0); }
Gate1Q pauli_y() { return Gate1Q::from(0.0, -kI, kI, 0.0); }
Gate1Q pauli_z() { return Gate1Q::from(1.0, 0.0, 0.0, -1.0); }
Gate1Q hadamard() {
  const double h = 1.0 / std::sqrt(2.0);
  return Gate1Q::from(h, h, h, -h);
}

Gate1Q rx(double phi) {
  const double c = std::cos(phi / 2), s = std::sin(phi / 2);
  return Gate1Q::from(c, -kI * s, -kI * s, c);
}

Gate1Q ry(double phi) {
  const double c = std::cos(phi / 2), s = std::sin(phi / 2);
  return Gate1Q::from(c, -s, s, c);
}

Gate1Q rz(double phi) {
  return Gate1Q::from(std::exp(-kI * (phi / 2)), 0.0, 0.0, std::exp(kI * (phi / 2)));
}

}  // namespace gates
}  // namespace cokern
