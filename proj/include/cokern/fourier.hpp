#pragma once

// Fourier analysis of covariant kernels on small finite groups with known
// character tables. Only Abelian built-ins ship (Z_m, Z*_p); any group can
// be described through FiniteGroupModel directly.

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

#include "cokern/group.hpp"

namespace cokern {

struct FiniteGroupModel {
  std::string name;
  /// mult[a][b] = index of a*b.
  std::vector<std::vector<int>> mult;
  int identity = 0;
  /// characters(J, g) = chi_J(g).
  Eigen::MatrixXcd characters;
  std::vector<int> irrep_dims;
  /// Unitary representation matrices D_g, all of the same dimension.
  std::vector<Eigen::MatrixXcd> rep;

  int order() const { return static_cast<int>(mult.size()); }
  int num_irreps() const { return static_cast<int>(irrep_dims.size()); }
  int rep_dim() const { return rep.empty() ? 0 : static_cast<int>(rep.front().rows()); }
  int inverse(int g) const;

  /// Identity, inverses, spot-checked associativity, homomorphism of rep,
  /// and row orthogonality of the characters within 1e-9.
  void validate() const;
};

/// Z_m acting on C^m by the regular representation D_g|h> = |g + h>.
FiniteGroupModel cyclic_group_model(int m);
/// Z*_p acting on C^{p-1} by D_x|z> = |x z mod p>; element index i is the residue i + 1.
FiniteGroupModel zp_star_group_model(const ZpStarGroup& grp);

/// Limit on the doubled representation dimension (rep_dim^2).
inline constexpr int kMaxDoubledDim = 4096;

/// (d_J/|G|) sum_g conj(chi_J(g)) D_g (x) conj(D_g)
Eigen::MatrixXcd irrep_projector(const FiniteGroupModel& gm, int J);

/// (|G|/d_J) Pi_J |psi, conj psi><psi, conj psi| Pi_J for every irrep J.
std::vector<Eigen::MatrixXcd> kernel_fourier_coefficients(const FiniteGroupModel& gm, const Eigen::VectorXcd& psi);

/// l(g) = (1/|G|) sum_J d_J tr[lhat(J) W_{g^-1}] with W = D (x) conj(D).
std::vector<double> fourier_invert(const std::vector<Eigen::MatrixXcd>& coeffs, const FiniteGroupModel& gm);

/// Direct evaluation l(g) = |<psi| D_g^dagger |psi>|^2.
std::vector<double> kernel_function_direct(const FiniteGroupModel& gm, const Eigen::VectorXcd& psi);

/// Scalar transform sum_g f(g) chi_J(g) (the one-dimensional-irrep case).
std::vector<std::complex<double>> scalar_fourier_transform(const FiniteGroupModel& gm, const std::vector<double>& f);

/// Subset state 2^{-k/2} sum_v |g^v> in the basis of zp_star_group_model.
Eigen::VectorXcd subset_fiducial(const ZpStarGroup& grp);

}  // namespace cokern
