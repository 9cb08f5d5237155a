#pragma once

// Covariant kernel evaluation: exact fidelities, shot sampling, a global
// depolarizing noise model with stretch factors, zero-noise extrapolation,
// and Gram-matrix assembly.

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "cokern/graph.hpp"
#include "cokern/lce.hpp"
#include "cokern/rng.hpp"
#include "cokern/statevector.hpp"

namespace cokern {

enum class KernelMode { kExact, kShots, kNoisyShots, kMitigated };
enum class InvarianceSide { kLeft, kRight };
enum class PsdPolicy { kNone, kClip, kJitter };

std::string to_string(KernelMode m);
std::string to_string(InvarianceSide s);
std::string to_string(PsdPolicy p);
KernelMode parse_kernel_mode(const std::string& s);
InvarianceSide parse_side(const std::string& s);
PsdPolicy parse_psd_policy(const std::string& s);

struct KernelConfig {
  KernelMode mode = KernelMode::kExact;
  /// Shots per circuit. 0 in noisy-shots/mitigated modes means the noisy
  /// probability is used without sampling.
  int shots = 8192;
  /// Depolarizing rate per unit stretch.
  double p_dep = 0.0;
  std::vector<double> stretches{1.0, 1.3};
  InvarianceSide side = InvarianceSide::kLeft;
  /// One entry shared by all qubits, or one per qubit.
  std::vector<double> lambda{1.5707963267948966};
  std::uint64_t seed = 0;
  int threads = 1;
  /// Applied to square training matrices in sampled modes.
  PsdPolicy psd_policy = PsdPolicy::kClip;

  void validate() const;
};

struct KernelMatrix {
  Eigen::MatrixXd values;
  std::uint64_t row_checksum = 0;
  std::uint64_t col_checksum = 0;
  KernelConfig config;
  bool square_training = false;
  bool symmetrized = false;
  bool psd_repaired = false;
  std::optional<double> min_eigenvalue;
  int clamped_entries = 0;
  double seconds = 0.0;

  Eigen::Index rows() const { return values.rows(); }
  Eigen::Index cols() const { return values.cols(); }
  double operator()(Eigen::Index i, Eigen::Index j) const { return values(i, j); }
};

/// Fiducial |psi_lambda>; lambda has one entry (shared) or one per qubit.
QuantumState prepare_fiducial(const CouplingGraph& graph, std::span<const double> lambda);

/// left:  |<psi| (x)x_k^dagger (x)z_k |psi>|^2
/// right: |<psi| (x)x_k (x)z_k^dagger |psi>|^2
double kernel_entry_exact(std::span<const Gate1Q> x, std::span<const Gate1Q> z, const QuantumState& fiducial,
                          InvarianceSide side = InvarianceSide::kLeft);

/// Binomial(shots, exact_value) / shots.
double kernel_entry_sampled(double exact_value, int shots, Rng& rng);

/// (1 - p c) v + p c 2^-n. Throws ValidationError unless 0 <= p c < 1.
double apply_noise(double value, double p_dep, double stretch, int n);

/// Least-squares line through (stretch_i, value_i) evaluated at stretch 0,
/// clamped to [0, 1]. `clamped` (optional) reports whether clamping fired.
double zne_extrapolate(std::span<const double> values, std::span<const double> stretches, bool* clamped = nullptr);

/// Full circuit V^dagger D_x^dagger D_z V |0^n> (left) whose all-zeros
/// probability is the kernel entry.
QuantumState kernel_circuit_state(std::span<const Gate1Q> x, std::span<const Gate1Q> z, const CouplingGraph& graph,
                                  std::span<const double> lambda, InvarianceSide side = InvarianceSide::kLeft);

/// Entry (i, j) runs exact -> [noise per stretch] -> [shots per stretch]
/// -> [ZNE]. When rows and cols hold the same points only the upper
/// triangle is evaluated. Entry randomness is seeded by (seed, i, j), so
/// the result does not depend on the thread count.
KernelMatrix build_kernel_matrix(const Dataset& rows, const Dataset& cols, const CouplingGraph& graph,
                                 const KernelConfig& cfg);

KernelMatrix symmetrize(const KernelMatrix& k);
/// clip: zero negative eigenvalues. jitter: add (|min eig| + 1e-10) I and
/// rescale to unit diagonal. Non-square input throws ValidationError.
KernelMatrix psd_repair(const KernelMatrix& k, PsdPolicy policy);

double min_eigenvalue(const Eigen::MatrixXd& symmetric);

}  // namespace cokern
