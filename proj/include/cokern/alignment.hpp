#pragma once

// Kernel alignment: min over fiducial parameters lambda of the SVM dual
// optimum F*(lambda), driven by SPSA.

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "cokern/kernel.hpp"
#include "cokern/lce.hpp"
#include "cokern/svm.hpp"

namespace cokern {

struct SpsaConfig {
  int steps = 21;
  double a = 0.1;
  double c = 0.1;
  double A = 0.0;
  double sigma = 0.602;
  double gamma = 0.101;
  std::vector<double> lambda0{0.1};
  std::uint64_t seed = 0;

  void validate() const;
};

struct SpsaGains {
  double a;
  double c;
};

/// a_i = a / (i + 1 + A)^sigma,  c_i = c / (i + 1)^gamma
SpsaGains spsa_gains(int i, const SpsaConfig& cfg);

/// Maps into [0, 2pi).
double wrap_angle(double x);

struct SpsaPerturbation {
  std::vector<double> plus;
  std::vector<double> minus;
  std::vector<int> delta;
};

/// delta uniform on {-1, +1}^q; lambda +- c_i delta, wrapped.
SpsaPerturbation spsa_perturb(std::span<const double> lambda, double c_i, Rng& rng);

enum class AlignmentObjective { kWeighted, kUnweighted, kCentered };
std::string to_string(AlignmentObjective o);
AlignmentObjective parse_alignment_objective(const std::string& s);

/// sum_ij K_ij y_i y_j
double unweighted_alignment(const Eigen::MatrixXd& K, std::span<const int> y);
/// (I - 11^T/m) K (I - 11^T/m)
Eigen::MatrixXd center_kernel(const Eigen::MatrixXd& K);
double centered_alignment(const Eigen::MatrixXd& K, std::span<const int> y);

/// Value minimized by SPSA: F* for the weighted objective, the negated
/// alignment for the other two.
double alignment_cost(AlignmentObjective objective, const Eigen::MatrixXd& K, std::span<const int> y,
                      const SvmOptions& svm);

struct AlignmentStep {
  int step = 0;
  std::vector<double> lambda;
  /// Cost at lambda (for the weighted objective, F*(lambda)).
  double cost = 0.0;
  // Filled for every step except the last record.
  std::optional<std::vector<double>> lambda_plus;
  std::optional<std::vector<double>> lambda_minus;
  std::optional<double> f_plus;
  std::optional<double> f_minus;
  std::optional<double> gain_a;
  std::optional<double> gain_c;
  std::optional<std::vector<int>> delta;
  double seconds = 0.0;
};

struct AlignmentTrace {
  std::vector<AlignmentStep> steps;
  std::vector<double> lambda_star;
};

/// Raised when a kernel build or QP fails mid-run; carries the steps
/// completed so far.
class AlignmentAborted : public NumericalError {
 public:
  AlignmentAborted(const std::string& what, AlignmentTrace partial)
      : NumericalError(what), partial_(std::move(partial)) {}
  const AlignmentTrace& partial() const { return partial_; }

 private:
  AlignmentTrace partial_;
};

struct AlignmentOptions {
  AlignmentObjective objective = AlignmentObjective::kWeighted;
  SvmOptions svm;
  /// Called after each record is complete (streaming trace output).
  std::function<void(const AlignmentStep&)> on_step;
};

/// Runs P = scfg.steps SPSA updates and returns P + 1 records: record i
/// holds lambda_i and its cost; records 0..P-1 also hold the perturbation
/// and both objective evaluations used for the update.
AlignmentTrace align(const Dataset& train, const CouplingGraph& graph, const KernelConfig& kcfg,
                     const SpsaConfig& scfg, const AlignmentOptions& options = {});

}  // namespace cokern
