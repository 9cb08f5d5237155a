#pragma once

#include <Eigen/Dense>
#include <span>
#include <vector>

namespace cokern {

struct ClassMetrics {
  double accuracy = 0.0;
  std::vector<double> decision_values;
  std::vector<int> misclassified;
};

ClassMetrics classification_metrics(std::span<const int> predicted, std::span<const int> truth,
                                    std::span<const double> decision_values);

struct GeometryMetrics {
  double hs_distance = 0.0;
  double variance_plus = 0.0;
  double variance_minus = 0.0;
};

/// ||Phi_+ - Phi_-||_HS^2 from kernel entries, Phi_+- being the class
/// centroids of the feature density matrices.
double centroid_hs_distance(const Eigen::MatrixXd& K, std::span<const int> y);

/// (1/M) sum_{i in class} K_ii - (1/M^2) sum_{i,j in class} K_ij
double interlabel_variance(const Eigen::MatrixXd& K, std::span<const int> y, int label);

GeometryMetrics geometry_metrics(const Eigen::MatrixXd& K, std::span<const int> y);

/// 1/2 sum_i |P_i - Q_i|. Both inputs must sum to 1 within 1e-6.
double total_variation_distance(std::span<const double> P, std::span<const double> Q);

}  // namespace cokern
