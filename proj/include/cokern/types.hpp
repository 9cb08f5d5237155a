#pragma once

#include <array>
#include <complex>
#include <stdexcept>
#include <string>

namespace cokern {

using cplx = std::complex<double>;

/// Raised for malformed inputs: bad shapes, out-of-range indices, invalid configs.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Raised when a numerical routine cannot deliver its contract
/// (QP non-convergence, PSD repair failure).
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Row-major 2x2 complex matrix: {m00, m01, m10, m11}.
struct Gate1Q {
  std::array<cplx, 4> m{cplx{1.0}, cplx{0.0}, cplx{0.0}, cplx{1.0}};

  static Gate1Q identity() { return {}; }
  static Gate1Q from(cplx m00, cplx m01, cplx m10, cplx m11) {
    return Gate1Q{{m00, m01, m10, m11}};
  }

  cplx operator()(int r, int c) const { return m[static_cast<std::size_t>(2 * r + c)]; }

  Gate1Q adjoint() const {
    return from(std::conj(m[0]), std::conj(m[2]), std::conj(m[1]), std::conj(m[3]));
  }

  friend Gate1Q operator*(const Gate1Q& a, const Gate1Q& b) {
    return from(a.m[0] * b.m[0] + a.m[1] * b.m[2], a.m[0] * b.m[1] + a.m[1] * b.m[3],
                a.m[2] * b.m[0] + a.m[3] * b.m[2], a.m[2] * b.m[1] + a.m[3] * b.m[3]);
  }

  cplx trace() const { return m[0] + m[3]; }

  /// Max elementwise deviation of U^dagger U from the identity.
  double unitarity_error() const;
  bool is_unitary(double tol = 1e-9) const { return unitarity_error() <= tol; }
};

namespace gates {

Gate1Q pauli_x();
Gate1Q pauli_y();
Gate1Q pauli_z();
Gate1Q hadamard();
/// exp(-i (phi/2) X), and likewise for Y and Z.
Gate1Q rx(double phi);
Gate1Q ry(double phi);
Gate1Q rz(double phi);

}  // namespace gates

/// |tr(A^dagger B)|; equals 2 iff A and B agree up to a global phase (for unitaries).
double phase_free_overlap(const Gate1Q& a, const Gate1Q& b);

}  // namespace cokern
