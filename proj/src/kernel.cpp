#include "cokern/kernel.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <random>
#include <thread>

#include "cokern/simd.hpp"

namespace cokern {

std::string to_string(KernelMode m) {
  switch (m) {
    case KernelMode::kExact:
      return "exact";
    case KernelMode::kShots:
      return "shots";
    case KernelMode::kNoisyShots:
      return "noisy-shots";
    case KernelMode::kMitigated:
      return "mitigated";
  }
  return "?";
}

std::string to_string(InvarianceSide s) { return s == InvarianceSide::kLeft ? "left" : "right"; }

std::string to_string(PsdPolicy p) {
  switch (p) {
    case PsdPolicy::kNone:
      return "none";
    case PsdPolicy::kClip:
      return "clip";
    case PsdPolicy::kJitter:
      return "jitter";
  }
  return "?";
}

KernelMode parse_kernel_mode(const std::string& s) {
  if (s == "exact") return KernelMode::kExact;
  if (s == "shots") return KernelMode::kShots;
  if (s == "noisy-shots") return KernelMode::kNoisyShots;
  if (s == "mitigated") return KernelMode::kMitigated;
  throw ValidationError("unknown kernel mode '" + s + "'");
}

InvarianceSide parse_side(const std::string& s) {
  if (s == "left") return InvarianceSide::kLeft;
  if (s == "right") return InvarianceSide::kRight;
  throw ValidationError("unknown invariance side '" + s + "'");
}

PsdPolicy parse_psd_policy(const std::string& s) {
  if (s == "none") return PsdPolicy::kNone;
  if (s == "clip") return PsdPolicy::kClip;
  if (s == "jitter") return PsdPolicy::kJitter;
  throw ValidationError("unknown PSD policy '" + s + "'");
}

void KernelConfig::validate() const {
  const bool sampled = mode != KernelMode::kExact;
  if (mode == KernelMode::kShots && shots < 1) throw ValidationError("shots mode needs shots >= 1");
  if (sampled && shots < 0) throw ValidationError("shots must be non-negative");
  if (!(p_dep >= 0.0 && p_dep < 1.0)) throw ValidationError("p_dep must lie in [0, 1)");
  if (stretches.empty()) throw ValidationError("at least one stretch factor is required");
  for (std::size_t i = 0; i < stretches.size(); ++i) {
    if (!(stretches[i] > 0.0)) throw ValidationError("stretch factors must be positive");
    if (i > 0 && !(stretches[i] > stretches[i - 1])) throw ValidationError("stretch factors must be strictly increasing");
    if (p_dep * stretches[i] >= 1.0) throw ValidationError("p_dep * stretch must stay below 1");
  }
  if (mode == KernelMode::kMitigated && stretches.size() < 2) throw ValidationError("mitigation needs >= 2 stretches");
  if (lambda.empty()) throw ValidationError("lambda must have at least one entry");
  for (double l : lambda)
    if (!std::isfinite(l)) throw ValidationError("lambda must be finite");
  if (threads < 1) throw ValidationError("threads must be >= 1");
}

QuantumState prepare_fiducial(const CouplingGraph& graph, std::span<const double> lambda) {
  const int n = graph.num_vertices();
  if (lambda.size() == 1) return prepare_fiducial(graph, lambda[0]);
  if (static_cast<int>(lambda.size()) != n) {
    throw ValidationError("lambda needs 1 or " + std::to_string(n) + " entries, got " + std::to_string(lambda.size()));
  }
  QuantumState s(n);
  for (int k = 0; k < n; ++k) s.apply_1q(k, gates::ry(lambda[static_cast<std::size_t>(k)]));
  for (auto [a, b] : graph.edges()) s.apply_cz(a, b);
  return s;
}

namespace {

Gate1Q relative_gate(const Gate1Q& x, const Gate1Q& z, InvarianceSide side) {
  return side == InvarianceSide::kLeft ? x.adjoint() * z : x * z.adjoint();
}

// scratch must have the fiducial's size; it is overwritten.
double exact_entry(std::span<const Gate1Q> x, std::span<const Gate1Q> z, const QuantumState& fiducial,
                   InvarianceSide side, QuantumState& scratch) {
  std::copy(fiducial.amplitudes().begin(), fiducial.amplitudes().end(), scratch.amplitudes().begin());
  const auto& k = simd::kernels();
  for (std::size_t q = 0; q < x.size(); ++q) {
    k.apply_1q(scratch.amplitudes(), std::size_t{1} << q, relative_gate(x[q], z[q], side));
  }
  return std::norm(k.inner(fiducial.amplitudes(), scratch.amplitudes()));
}

}  // namespace

double kernel_entry_exact(std::span<const Gate1Q> x, std::span<const Gate1Q> z, const QuantumState& fiducial,
                          InvarianceSide side) {
  const auto n = static_cast<std::size_t>(fiducial.num_qubits());
  if (x.size() != n || z.size() != n) {
    throw ValidationError("kernel entry needs " + std::to_string(n) + " gates per datum, got " +
                          std::to_string(x.size()) + " and " + std::to_string(z.size()));
  }
  QuantumState scratch(fiducial.num_qubits());
  return exact_entry(x, z, fiducial, side, scratch);
}

double kernel_entry_sampled(double exact_value, int shots, Rng& rng) {
  if (shots < 1) throw ValidationError("shots must be >= 1");
  const double p = std::clamp(exact_value, 0.0, 1.0);
  std::binomial_distribution<long> dist(shots, p);
  return static_cast<double>(dist(rng)) / static_cast<double>(shots);
}

double apply_noise(double value, double p_dep, double stretch, int n) {
  const double rate = p_dep * stretch;
  if (!(rate >= 0.0 && rate < 1.0)) throw ValidationError("effective depolarizing rate must lie in [0, 1)");
  return (1.0 - rate) * value + rate * std::ldexp(1.0, -n);
}

double zne_extrapolate(std::span<const double> values, std::span<const double> stretches, bool* clamped) {
  if (values.size() != stretches.size()) throw ValidationError("one value per stretch is required");
  if (values.size() < 2) throw ValidationError("extrapolation needs at least two stretches");
  const double n = static_cast<double>(values.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    mx += stretches[i];
    my += values[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    sxx += (stretches[i] - mx) * (stretches[i] - mx);
    sxy += (stretches[i] - mx) * (values[i] - my);
  }
  if (sxx <= 0.0) throw ValidationError("stretch factors must be distinct");
  const double raw = my - (sxy / sxx) * mx;
  const double out = std::clamp(raw, 0.0, 1.0);
  if (clamped) *clamped = out != raw;
  return out;
}

QuantumState kernel_circuit_state(std::span<const Gate1Q> x, std::span<const Gate1Q> z, const CouplingGraph& graph,
                                  std::span<const double> lambda, InvarianceSide side) {
  QuantumState s = prepare_fiducial(graph, lambda);
  const int n = s.num_qubits();
  if (static_cast<int>(x.size()) != n || static_cast<int>(z.size()) != n) {
    throw ValidationError("kernel circuit needs one gate per qubit");
  }
  for (int q = 0; q < n; ++q) {
    const auto k = static_cast<std::size_t>(q);
    if (side == InvarianceSide::kLeft) {
      s.apply_1q(q, z[k]);
      s.apply_1q(q, x[k].adjoint());
    } else {
      s.apply_1q(q, z[k].adjoint());
      s.apply_1q(q, x[k]);
    }
  }
  // V^dagger: undo the entanglers, then the rotations.
  for (auto [a, b] : graph.edges()) s.apply_cz(a, b);
  for (int q = 0; q < n; ++q) {
    const double l = lambda.size() == 1 ? lambda[0] : lambda[static_cast<std::size_t>(q)];
    s.apply_1q(q, gates::ry(-l));
  }
  return s;
}

double min_eigenvalue(const Eigen::MatrixXd& symmetric) {
  if (symmetric.rows() == 0) return 0.0;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(symmetric, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

KernelMatrix build_kernel_matrix(const Dataset& rows, const Dataset& cols, const CouplingGraph& graph,
                                 const KernelConfig& cfg) {
  cfg.validate();
  const int n = graph.num_vertices();
  if (rows.n != n || cols.n != n) {
    throw ValidationError("datasets have n=" + std::to_string(rows.n) + "/" + std::to_string(cols.n) +
                          " but the graph has " + std::to_string(n) + " vertices");
  }
  const auto t0 = std::chrono::steady_clock::now();
  const QuantumState fiducial = prepare_fiducial(graph, cfg.lambda);

  auto to_gates = [](const Dataset& d) {
    std::vector<std::vector<Gate1Q>> g;
    g.reserve(d.size());
    for (const auto& p : d.points) g.push_back(datum_to_unitaries(p.theta));
    return g;
  };
  const auto row_gates = to_gates(rows);
  const bool square = &rows == &cols || rows.points == cols.points;
  const auto col_gates = square ? row_gates : to_gates(cols);

  const auto m = static_cast<Eigen::Index>(rows.size());
  const auto mc = static_cast<Eigen::Index>(cols.size());
  KernelMatrix out;
  out.values = Eigen::MatrixXd::Zero(m, mc);
  out.row_checksum = dataset_checksum(rows);
  out.col_checksum = dataset_checksum(cols);
  out.config = cfg;
  out.square_training = square;

  const std::vector<double>& stretches = cfg.stretches;
  std::vector<int> clamped_per_row(static_cast<std::size_t>(m), 0);

  auto entry = [&](Eigen::Index i, Eigen::Index j, QuantumState& scratch) {
    const double exact = (square && i == j) ? 1.0
                                            : exact_entry(row_gates[static_cast<std::size_t>(i)],
                                                          col_gates[static_cast<std::size_t>(j)], fiducial, cfg.side,
                                                          scratch);
    if (cfg.mode == KernelMode::kExact) return exact;
    Rng rng = make_rng(cfg.seed, {stream::kShots, static_cast<std::uint64_t>(i), static_cast<std::uint64_t>(j)});
    auto measure = [&](double p) { return cfg.shots > 0 ? kernel_entry_sampled(p, cfg.shots, rng) : p; };
    switch (cfg.mode) {
      case KernelMode::kShots:
        return kernel_entry_sampled(exact, cfg.shots, rng);
      case KernelMode::kNoisyShots:
        return measure(apply_noise(exact, cfg.p_dep, stretches.front(), n));
      case KernelMode::kMitigated: {
        std::vector<double> vals;
        vals.reserve(stretches.size());
        for (double c : stretches) vals.push_back(measure(apply_noise(exact, cfg.p_dep, c, n)));
        bool clamped = false;
        const double v = zne_extrapolate(vals, stretches, &clamped);
        if (clamped) ++clamped_per_row[static_cast<std::size_t>(i)];
        return v;
      }
      default:
        return exact;
    }
  };

  auto work = [&](int worker, int nworkers) {
    QuantumState scratch(n);
    for (Eigen::Index i = worker; i < m; i += nworkers) {
      for (Eigen::Index j = square ? i : 0; j < mc; ++j) out.values(i, j) = entry(i, j, scratch);
    }
  };
  const int nthreads = std::max(1, std::min<int>(cfg.threads, static_cast<int>(std::max<Eigen::Index>(m, 1))));
  if (nthreads == 1) {
    work(0, 1);
  } else {
    std::vector<std::jthread> pool;
    for (int t = 0; t < nthreads; ++t) pool.emplace_back(work, t, nthreads);
  }
  if (square) {
    for (Eigen::Index i = 0; i < m; ++i)
      for (Eigen::Index j = 0; j < i; ++j) out.values(i, j) = out.values(j, i);
  }
  for (int c : clamped_per_row) out.clamped_entries += c;

  if (square) {
    if (cfg.mode != KernelMode::kExact && cfg.psd_policy != PsdPolicy::kNone) {
      out = psd_repair(out, cfg.psd_policy);
    } else {
      out.min_eigenvalue = min_eigenvalue(out.values);
    }
  }
  out.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return out;
}

KernelMatrix symmetrize(const KernelMatrix& k) {
  if (k.rows() != k.cols()) throw ValidationError("cannot symmetrize a non-square matrix");
  KernelMatrix out = k;
  out.values = 0.5 * (k.values + k.values.transpose());
  out.symmetrized = true;
  return out;
}

KernelMatrix psd_repair(const KernelMatrix& k, PsdPolicy policy) {
  if (k.rows() != k.cols()) throw ValidationError("PSD repair needs a square matrix");
  KernelMatrix out = k.values == k.values.transpose() ? k : symmetrize(k);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(out.values);
  if (es.info() != Eigen::Success) throw NumericalError("eigendecomposition failed during PSD repair");
  const double lo = es.eigenvalues().minCoeff();
  out.min_eigenvalue = lo;
  if (policy == PsdPolicy::kNone || lo >= 0.0) return out;

  if (policy == PsdPolicy::kClip) {
    const Eigen::VectorXd clipped = es.eigenvalues().cwiseMax(0.0);
    out.values = es.eigenvectors() * clipped.asDiagonal() * es.eigenvectors().transpose();
    out.values = 0.5 * (out.values + out.values.transpose()).eval();
  } else {
    const double delta = std::abs(lo) + 1e-10;
    out.values.diagonal().array() += delta;
    const Eigen::VectorXd d = out.values.diagonal();
    if ((d.array() <= 0.0).any()) throw NumericalError("jitter repair produced a non-positive diagonal");
    const Eigen::VectorXd s = d.cwiseSqrt().cwiseInverse();
    out.values = s.asDiagonal() * out.values * s.asDiagonal();
  }
  out.psd_repaired = true;
  return out;
}

}  // namespace cokern
