#pragma once

// Soft-margin SVM dual:
//   maximize  sum_i a_i - 1/2 sum_ij a_i a_j y_i y_j K_ij
//   s.t.      0 <= a_i <= C,  sum_i y_i a_i = 0
// solved by pairwise coordinate ascent on the maximal violating pair.

#include <Eigen/Dense>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace cokern {

struct SvmOptions {
  double C = 1.0;
  /// Stop once the maximal KKT violation m(a) - M(a) falls to this value.
  double tolerance = 1e-8;
  long max_iterations = 1'000'000;
  /// a_i above this counts as a support vector.
  double support_threshold = 1e-8;
  /// Input kernels with min eigenvalue below -psd_tolerance * max(1, max|K_ii|) are rejected.
  double psd_tolerance = 1e-8;
  bool record_objective = false;
};

struct SvmModel {
  std::vector<double> alpha;
  double b = 0.0;
  std::vector<int> support;
  double C = 1.0;
  std::vector<int> labels;
  std::uint64_t kernel_checksum = 0;
  /// Only one class was present; the model predicts that class everywhere.
  bool degenerate = false;
  std::string warning;
};

struct QpReport {
  double objective = 0.0;
  long iterations = 0;
  double max_kkt_violation = 0.0;
  bool converged = false;
  /// Objective after each pair update, when requested.
  std::vector<double> objective_trace;
};

/// Throws ValidationError on shape problems, non +-1 labels, C <= 0, or a
/// kernel that is not PSD within tolerance; NumericalError if the
/// iteration cap is hit.
std::pair<SvmModel, QpReport> solve_dual(const Eigen::MatrixXd& K, std::span<const int> y, const SvmOptions& opt = {});

/// Mean of y_i - sum_j y_j a_j K_ji over free support vectors; midpoint of
/// the feasible KKT interval when none are free.
double compute_bias(const SvmModel& model, const Eigen::MatrixXd& K, std::span<const int> y,
                    double support_threshold = 1e-8);

/// sum_{i in SV} y_i a_i k_row[i] + b
double decision_value(const SvmModel& model, std::span<const double> k_row);
/// Rows are query points, columns training points. Ties (exactly 0) map to +1.
std::vector<int> predict(const SvmModel& model, const Eigen::MatrixXd& k_test);
std::vector<double> decision_values(const SvmModel& model, const Eigen::MatrixXd& k_test);

double objective_f(std::span<const double> alpha, const Eigen::MatrixXd& K, std::span<const int> y);

}  // namespace cokern
