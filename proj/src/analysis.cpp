#include "cokern/analysis.hpp"

#include <cmath>
#include <algorithm>
#include <numeric>

#include "cokern/types.hpp"

namespace cokern {

ClassMetrics classification_metrics(std::span<const int> predicted, std::span<const int> truth,
                                    std::span<const double> decision_values) {
  if (predicted.size() != truth.size() || decision_values.size() != truth.size()) {
    throw ValidationError("predictions, labels and decision values must have equal length");
  }
  ClassMetrics out;
  out.decision_values.assign(decision_values.begin(), decision_values.end());
  for (std::size_t i = 0; i < truth.size(); ++i)
    if (predicted[i] != truth[i]) out.misclassified.push_back(static_cast<int>(i));
  out.accuracy = truth.empty() ? 0.0
                               : static_cast<double>(truth.size() - out.misclassified.size()) /
                                     static_cast<double>(truth.size());
  return out;
}

namespace {

void check_square(const Eigen::MatrixXd& K, std::span<const int> y) {
  if (K.rows() != K.cols() || static_cast<std::size_t>(K.rows()) != y.size()) {
    throw ValidationError("geometry metrics need a square kernel matching the labels");
  }
}

// Sum of K over rows labelled a and columns labelled b.
double block_sum(const Eigen::MatrixXd& K, std::span<const int> y, int a, int b) {
  double s = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    if (y[i] != a) continue;
    for (std::size_t j = 0; j < y.size(); ++j)
      if (y[j] == b) s += K(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
  }
  return s;
}

double class_size(std::span<const int> y, int label) {
  return static_cast<double>(std::count(y.begin(), y.end(), label));
}

}  // namespace

double centroid_hs_distance(const Eigen::MatrixXd& K, std::span<const int> y) {
  check_square(K, y);
  const double mp = class_size(y, 1), mm = class_size(y, -1);
  if (mp == 0 || mm == 0) throw ValidationError("HS distance needs both classes");
  return block_sum(K, y, 1, 1) / (mp * mp) + block_sum(K, y, -1, -1) / (mm * mm) -
         2.0 * block_sum(K, y, 1, -1) / (mp * mm);
}

double interlabel_variance(const Eigen::MatrixXd& K, std::span<const int> y, int label) {
  check_square(K, y);
  const double M = class_size(y, label);
  if (M == 0) throw ValidationError("class " + std::to_string(label) + " is not present");
  double diag = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i)
    if (y[i] == label) diag += K(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i));
  return diag / M - block_sum(K, y, label, label) / (M * M);
}

GeometryMetrics geometry_metrics(const Eigen::MatrixXd& K, std::span<const int> y) {
  return {centroid_hs_distance(K, y), interlabel_variance(K, y, 1), interlabel_variance(K, y, -1)};
}

double total_variation_distance(std::span<const double> P, std::span<const double> Q) {
  if (P.size() != Q.size()) throw ValidationError("distributions have different lengths");
  const double sp = std::accumulate(P.begin(), P.end(), 0.0);
  const double sq = std::accumulate(Q.begin(), Q.end(), 0.0);
  if (std::abs(sp - 1.0) > 1e-6 || std::abs(sq - 1.0) > 1e-6) throw ValidationError("distributions must sum to 1");
  double d = 0.0;
  for (std::size_t i = 0; i < P.size(); ++i) d += std::abs(P[i] - Q[i]);
  return 0.5 * d;
}

}  // namespace cokern
