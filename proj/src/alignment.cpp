#include "cokern/alignment.hpp"

#include <chrono>
#include <cmath>
#include <numbers>

namespace cokern {

void SpsaConfig::validate() const {
  if (steps < 0) throw ValidationError("SPSA steps must be non-negative");
  if (!(a > 0.0) || !(c > 0.0)) throw ValidationError("SPSA gains a and c must be positive");
  if (!(sigma > 0.0 && sigma <= 1.0) || !(gamma > 0.0 && gamma <= 1.0)) {
    throw ValidationError("SPSA exponents sigma and gamma must lie in (0, 1]");
  }
  if (!(A >= 0.0)) throw ValidationError("SPSA stability constant A must be non-negative");
  if (lambda0.empty()) throw ValidationError("initial lambda must have at least one entry");
}

SpsaGains spsa_gains(int i, const SpsaConfig& cfg) {
  if (i < 0) throw ValidationError("SPSA step index must be non-negative");
  return {cfg.a / std::pow(i + 1 + cfg.A, cfg.sigma), cfg.c / std::pow(i + 1, cfg.gamma)};
}

double wrap_angle(double x) {
  constexpr double two_pi = 2 * std::numbers::pi;
  double r = std::fmod(x, two_pi);
  if (r < 0.0) r += two_pi;
  return r >= two_pi ? 0.0 : r;
}

SpsaPerturbation spsa_perturb(std::span<const double> lambda, double c_i, Rng& rng) {
  SpsaPerturbation p;
  std::bernoulli_distribution coin(0.5);
  for (double l : lambda) {
    const int d = coin(rng) ? 1 : -1;
    p.delta.push_back(d);
    p.plus.push_back(wrap_angle(l + c_i * d));
    p.minus.push_back(wrap_angle(l - c_i * d));
  }
  return p;
}

std::string to_string(AlignmentObjective o) {
  switch (o) {
    case AlignmentObjective::kWeighted:
      return "weighted";
    case AlignmentObjective::kUnweighted:
      return "unweighted";
    case AlignmentObjective::kCentered:
      return "centered";
  }
  return "?";
}

AlignmentObjective parse_alignment_objective(const std::string& s) {
  if (s == "weighted") return AlignmentObjective::kWeighted;
  if (s == "unweighted") return AlignmentObjective::kUnweighted;
  if (s == "centered") return AlignmentObjective::kCentered;
  throw ValidationError("unknown alignment objective '" + s + "'");
}

double unweighted_alignment(const Eigen::MatrixXd& K, std::span<const int> y) {
  if (K.rows() != K.cols() || static_cast<std::size_t>(K.rows()) != y.size()) {
    throw ValidationError("alignment needs a square kernel matching the labels");
  }
  Eigen::VectorXd v(K.rows());
  for (Eigen::Index i = 0; i < K.rows(); ++i) v(i) = y[static_cast<std::size_t>(i)];
  return v.dot(K * v);
}

Eigen::MatrixXd center_kernel(const Eigen::MatrixXd& K) {
  if (K.rows() != K.cols()) throw ValidationError("centering needs a square kernel");
  const auto m = K.rows();
  const Eigen::MatrixXd H = Eigen::MatrixXd::Identity(m, m) - Eigen::MatrixXd::Constant(m, m, 1.0 / static_cast<double>(m));
  return H * K * H;
}

double centered_alignment(const Eigen::MatrixXd& K, std::span<const int> y) {
  return unweighted_alignment(center_kernel(K), y);
}

double alignment_cost(AlignmentObjective objective, const Eigen::MatrixXd& K, std::span<const int> y,
                      const SvmOptions& svm) {
  switch (objective) {
    case AlignmentObjective::kWeighted:
      return solve_dual(K, y, svm).second.objective;
    case AlignmentObjective::kUnweighted:
      return -unweighted_alignment(K, y);
    case AlignmentObjective::kCentered:
      return -centered_alignment(K, y);
  }
  throw ValidationError("unknown alignment objective");
}

AlignmentTrace align(const Dataset& train, const CouplingGraph& graph, const KernelConfig& kcfg,
                     const SpsaConfig& scfg, const AlignmentOptions& options) {
  scfg.validate();
  kcfg.validate();
  train.validate();
  if (train.count_minus == 0 || train.count_plus == 0) throw ValidationError("alignment needs both classes");
  const auto y = train.labels();

  AlignmentTrace trace;
  Rng rng = make_rng(scfg.seed, {stream::kSpsa});

  // Each evaluation gets its own shot seed so reruns replay exactly.
  auto cost_at = [&](const std::vector<double>& lambda, int step, std::uint64_t slot) {
    KernelConfig cfg = kcfg;
    cfg.lambda = lambda;
    cfg.seed = derive_seed(kcfg.seed, {stream::kSpsa, static_cast<std::uint64_t>(step), slot});
    const KernelMatrix K = build_kernel_matrix(train, train, graph, cfg);
    return alignment_cost(options.objective, K.values, y, options.svm);
  };

  std::vector<double> lambda;
  for (double l : scfg.lambda0) lambda.push_back(wrap_angle(l));

  for (int i = 0; i <= scfg.steps; ++i) {
    const auto t0 = std::chrono::steady_clock::now();
    AlignmentStep rec;
    rec.step = i;
    rec.lambda = lambda;
    try {
      rec.cost = cost_at(lambda, i, 0);
      if (i < scfg.steps) {
        const SpsaGains g = spsa_gains(i, scfg);
        SpsaPerturbation p = spsa_perturb(lambda, g.c, rng);
        const double f_plus = cost_at(p.plus, i, 1);
        const double f_minus = cost_at(p.minus, i, 2);
        // Gradient estimate (F+ - F-) / (2 c_i delta_k); 1/delta_k = delta_k for +-1 entries.
        const double step_scale = g.a / (2.0 * g.c) * (f_plus - f_minus);
        for (std::size_t k = 0; k < lambda.size(); ++k) lambda[k] = wrap_angle(lambda[k] - step_scale * p.delta[k]);
        rec.lambda_plus = std::move(p.plus);
        rec.lambda_minus = std::move(p.minus);
        rec.delta = std::move(p.delta);
        rec.f_plus = f_plus;
        rec.f_minus = f_minus;
        rec.gain_a = g.a;
        rec.gain_c = g.c;
      }
    } catch (const std::exception& e) {
      throw AlignmentAborted("alignment aborted at step " + std::to_string(i) + ": " + e.what(), trace);
    }
    rec.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    trace.steps.push_back(rec);
    if (options.on_step) options.on_step(trace.steps.back());
  }
  trace.lambda_star = trace.steps.back().lambda;
  return trace;
}

}  // namespace cokern
