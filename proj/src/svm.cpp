#include "cokern/svm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "cokern/kernel.hpp"
#include "cokern/types.hpp"

namespace cokern {
namespace {

constexpr double kTau = 1e-12;

void check_problem(const Eigen::MatrixXd& K, std::span<const int> y) {
  if (K.rows() != K.cols()) throw ValidationError("training kernel must be square");
  if (static_cast<std::size_t>(K.rows()) != y.size()) {
    throw ValidationError("kernel is " + std::to_string(K.rows()) + "x" + std::to_string(K.cols()) + " but there are " +
                          std::to_string(y.size()) + " labels");
  }
  for (int v : y)
    if (v != 1 && v != -1) throw ValidationError("labels must be +1 or -1");
}

// F = -f with f = 1/2 a^T Q a - e^T a and G = Q a - e, so F = -1/2 a^T (G - e).
double dual_objective(const std::vector<double>& a, const std::vector<double>& G) {
  double f = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) f += a[i] * (G[i] - 1.0);
  return -0.5 * f;
}

}  // namespace

double objective_f(std::span<const double> alpha, const Eigen::MatrixXd& K, std::span<const int> y) {
  if (alpha.size() != y.size() || K.rows() != K.cols() || static_cast<std::size_t>(K.rows()) != y.size()) {
    throw ValidationError("objective needs matching alpha, labels and square kernel");
  }
  double lin = 0.0, quad = 0.0;
  for (std::size_t i = 0; i < alpha.size(); ++i) {
    lin += alpha[i];
    for (std::size_t j = 0; j < alpha.size(); ++j) {
      quad += alpha[i] * alpha[j] * y[i] * y[j] * K(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
    }
  }
  return lin - 0.5 * quad;
}

std::pair<SvmModel, QpReport> solve_dual(const Eigen::MatrixXd& K, std::span<const int> y, const SvmOptions& opt) {
  check_problem(K, y);
  if (!(opt.C > 0.0)) throw ValidationError("box parameter C must be positive");
  const auto m = static_cast<std::size_t>(K.rows());

  SvmModel model;
  model.C = opt.C;
  model.labels.assign(y.begin(), y.end());
  model.alpha.assign(m, 0.0);
  QpReport report;

  const bool has_plus = std::find(y.begin(), y.end(), 1) != y.end();
  const bool has_minus = std::find(y.begin(), y.end(), -1) != y.end();
  if (!has_plus || !has_minus) {
    model.degenerate = true;
    model.b = has_plus ? 1.0 : -1.0;
    model.warning = "single-class training labels; returning a constant classifier";
    report.converged = true;
    return {model, report};
  }

  const double scale = std::max(1.0, K.diagonal().cwiseAbs().maxCoeff());
  if (min_eigenvalue(0.5 * (K + K.transpose())) < -opt.psd_tolerance * scale) {
    throw ValidationError("training kernel is not positive semidefinite; repair it first");
  }

  Eigen::MatrixXd Q(K.rows(), K.cols());
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j) {
      const auto ii = static_cast<Eigen::Index>(i), jj = static_cast<Eigen::Index>(j);
      Q(ii, jj) = y[i] * y[j] * K(ii, jj);
    }

  std::vector<double>& a = model.alpha;
  std::vector<double> G(m, -1.0);
  const double C = opt.C;
  auto in_up = [&](std::size_t t) { return y[t] == 1 ? a[t] < C : a[t] > 0.0; };
  auto in_low = [&](std::size_t t) { return y[t] == 1 ? a[t] > 0.0 : a[t] < C; };

  for (;;) {
    double gmax = -std::numeric_limits<double>::infinity();
    double gmin = std::numeric_limits<double>::infinity();
    std::size_t i = m, j = m;
    for (std::size_t t = 0; t < m; ++t) {
      const double v = -y[t] * G[t];
      if (in_up(t) && v > gmax) {
        gmax = v;
        i = t;
      }
      if (in_low(t) && v < gmin) {
        gmin = v;
        j = t;
      }
    }
    report.max_kkt_violation = (i == m || j == m) ? 0.0 : std::max(0.0, gmax - gmin);
    if (report.max_kkt_violation <= opt.tolerance) {
      report.converged = true;
      break;
    }
    if (report.iterations >= opt.max_iterations) break;
    ++report.iterations;

    const auto ii = static_cast<Eigen::Index>(i), jj = static_cast<Eigen::Index>(j);
    const double ai_old = a[i], aj_old = a[j];
    if (y[i] != y[j]) {
      double quad = Q(ii, ii) + Q(jj, jj) + 2.0 * Q(ii, jj);
      if (quad <= 0.0) quad = kTau;
      const double delta = (-G[i] - G[j]) / quad;
      const double diff = a[i] - a[j];
      a[i] += delta;
      a[j] += delta;
      if (diff > 0.0) {
        if (a[j] < 0.0) {
          a[j] = 0.0;
          a[i] = diff;
        }
      } else if (a[i] < 0.0) {
        a[i] = 0.0;
        a[j] = -diff;
      }
      if (diff > 0.0) {
        if (a[i] > C) {
          a[i] = C;
          a[j] = C - diff;
        }
      } else if (a[j] > C) {
        a[j] = C;
        a[i] = C + diff;
      }
    } else {
      double quad = Q(ii, ii) + Q(jj, jj) - 2.0 * Q(ii, jj);
      if (quad <= 0.0) quad = kTau;
      const double delta = (G[i] - G[j]) / quad;
      const double sum = a[i] + a[j];
      a[i] -= delta;
      a[j] += delta;
      if (sum > C) {
        if (a[i] > C) {
          a[i] = C;
          a[j] = sum - C;
        }
      } else if (a[j] < 0.0) {
        a[j] = 0.0;
        a[i] = sum;
      }
      if (sum > C) {
        if (a[j] > C) {
          a[j] = C;
          a[i] = sum - C;
        }
      } else if (a[i] < 0.0) {
        a[i] = 0.0;
        a[j] = sum;
      }
    }
    const double di = a[i] - ai_old, dj = a[j] - aj_old;
    for (std::size_t t = 0; t < m; ++t) {
      const auto tt = static_cast<Eigen::Index>(t);
      G[t] += Q(tt, ii) * di + Q(tt, jj) * dj;
    }
    if (opt.record_objective) report.objective_trace.push_back(dual_objective(a, G));
  }

  report.objective = dual_objective(a, G);
  for (std::size_t t = 0; t < m; ++t)
    if (a[t] > opt.support_threshold) model.support.push_back(static_cast<int>(t));
  model.b = compute_bias(model, K, y, opt.support_threshold);
  if (!report.converged) {
    throw NumericalError("SVM dual did not converge within " + std::to_string(opt.max_iterations) +
                         " iterations (KKT violation " + std::to_string(report.max_kkt_violation) + ")");
  }
  return {model, report};
}

double compute_bias(const SvmModel& model, const Eigen::MatrixXd& K, std::span<const int> y, double support_threshold) {
  check_problem(K, y);
  const auto m = y.size();
  if (model.alpha.size() != m) throw ValidationError("model and kernel disagree on the training size");
  bool any_sv = false;
  for (double v : model.alpha) any_sv = any_sv || v > support_threshold;
  if (!any_sv) throw ValidationError("model has no support vectors");

  // r_i = y_i - sum_j y_j a_j K_ji is the bias that puts point i exactly on its margin.
  double free_sum = 0.0;
  int free_count = 0;
  double lb = -std::numeric_limits<double>::infinity();
  double ub = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < m; ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < m; ++j) s += y[j] * model.alpha[j] * K(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i));
    const double r = y[i] - s;
    const double ai = model.alpha[i];
    if (ai > support_threshold && ai < model.C - support_threshold) {
      free_sum += r;
      ++free_count;
      continue;
    }
    // At the upper bound y_i d_i <= 1; at zero y_i d_i >= 1.
    const bool at_upper = ai >= model.C - support_threshold;
    if ((y[i] == 1) == at_upper) {
      ub = std::min(ub, r);
    } else {
      lb = std::max(lb, r);
    }
  }
  if (free_count > 0) return free_sum / free_count;
  if (std::isfinite(lb) && std::isfinite(ub)) return 0.5 * (lb + ub);
  return std::isfinite(lb) ? lb : ub;
}

double decision_value(const SvmModel& model, std::span<const double> k_row) {
  if (k_row.size() != model.alpha.size()) {
    throw ValidationError("kernel row has " + std::to_string(k_row.size()) + " entries, model has " +
                          std::to_string(model.alpha.size()) + " training points");
  }
  double d = model.b;
  for (int i : model.support) {
    const auto k = static_cast<std::size_t>(i);
    d += model.labels[k] * model.alpha[k] * k_row[k];
  }
  return d;
}

std::vector<double> decision_values(const SvmModel& model, const Eigen::MatrixXd& k_test) {
  if (static_cast<std::size_t>(k_test.cols()) != model.alpha.size()) {
    throw ValidationError("test kernel has " + std::to_string(k_test.cols()) + " columns, model has " +
                          std::to_string(model.alpha.size()) + " training points");
  }
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(k_test.rows()));
  std::vector<double> row(static_cast<std::size_t>(k_test.cols()));
  for (Eigen::Index r = 0; r < k_test.rows(); ++r) {
    for (Eigen::Index c = 0; c < k_test.cols(); ++c) row[static_cast<std::size_t>(c)] = k_test(r, c);
    out.push_back(decision_value(model, row));
  }
  return out;
}

std::vector<int> predict(const SvmModel& model, const Eigen::MatrixXd& k_test) {
  std::vector<int> labels;
  for (double d : decision_values(model, k_test)) labels.push_back(d >= 0.0 ? 1 : -1);
  return labels;
}

}  // namespace cokern
