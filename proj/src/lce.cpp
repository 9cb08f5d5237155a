#include "cokern/lce.hpp"

#include <bit>
#include <cmath>
#include <numbers>
#include <random>

namespace cokern {

std::vector<int> Dataset::labels() const {
  std::vector<int> y;
  y.reserve(points.size());
  for (const auto& p : points) y.push_back(p.label);
  return y;
}

void Dataset::validate() const {
  int minus = 0, plus = 0;
  for (const auto& p : points) {
    if (static_cast<int>(p.theta.size()) != 2 * n) {
      throw ValidationError("data point has " + std::to_string(p.theta.size()) + " angles, expected " +
                            std::to_string(2 * n));
    }
    if (p.label != 1 && p.label != -1) throw ValidationError("label must be +1 or -1");
    for (double t : p.theta)
      if (!std::isfinite(t)) throw ValidationError("non-finite angle in data point");
    (p.label > 0 ? plus : minus)++;
  }
  if (minus != count_minus || plus != count_plus) {
    throw ValidationError("label counts do not match dataset provenance");
  }
}

LceProblem make_problem(const CouplingGraph& graph, std::vector<double> c_plus, std::vector<double> c_minus,
                        std::uint64_t seed) {
  const auto want = static_cast<std::size_t>(2 * graph.num_vertices());
  if (c_plus.size() != want || c_minus.size() != want) {
    throw ValidationError("representatives need " + std::to_string(want) + " angles");
  }
  return LceProblem{graph, graph_stabilizer_generators(graph), std::move(c_plus), std::move(c_minus), seed};
}

LceProblem new_problem(const CouplingGraph& graph, std::uint64_t seed) {
  Rng rng = make_rng(seed, {stream::kProblem});
  std::uniform_real_distribution<double> u(-std::numbers::pi / 2, std::numbers::pi / 2);
  const auto len = static_cast<std::size_t>(2 * graph.num_vertices());
  std::vector<double> plus(len), minus(len);
  for (auto& v : plus) v = u(rng);
  for (auto& v : minus) v = u(rng);
  return make_problem(graph, std::move(plus), std::move(minus), seed);
}

DataPoint sample_datum(const LceProblem& p, int label, double epsilon, const PauliString& s, Rng& rng) {
  if (!(epsilon >= 0.0)) throw ValidationError("perturbation variance must be non-negative");
  if (label != 1 && label != -1) throw ValidationError("label must be +1 or -1");
  const int n = p.num_qubits();
  if (s.size() != n) throw ValidationError("stabilizer element has wrong length");
  const auto& c = p.representative(label);
  DataPoint d{std::vector<double>(static_cast<std::size_t>(2 * n)), label};
  for (int k = 0; k < n; ++k) {
    const auto i = static_cast<std::size_t>(2 * k);
    auto [t1, t2] = compose_euler_with_pauli({c[i], c[i + 1]}, s[k]);
    d.theta[i] = t1;
    d.theta[i + 1] = t2;
  }
  if (epsilon > 0.0) {
    std::normal_distribution<double> noise(0.0, std::sqrt(epsilon));
    for (auto& t : d.theta) t += noise(rng);
  }
  return d;
}

DataPoint sample_datum(const LceProblem& p, int label, double epsilon, Rng& rng) {
  const PauliString s = sample_stabilizer_element(p.stabilizer, rng);
  return sample_datum(p, label, epsilon, s, rng);
}

Dataset generate_dataset(const LceProblem& p, int m_per_label, double epsilon, std::uint64_t seed) {
  if (m_per_label < 1) throw ValidationError("need at least one point per label");
  Dataset d;
  d.n = p.num_qubits();
  d.problem_seed = p.seed;
  d.seed = seed;
  d.epsilon = epsilon;
  d.count_minus = d.count_plus = m_per_label;
  d.points.reserve(static_cast<std::size_t>(2 * m_per_label));
  for (int i = 0; i < 2 * m_per_label; ++i) {
    Rng rng = make_rng(seed, {static_cast<std::uint64_t>(i)});
    d.points.push_back(sample_datum(p, i < m_per_label ? -1 : 1, epsilon, rng));
  }
  return d;
}

double representation_distance(const DataPoint& a, const DataPoint& b) {
  if (a.theta.size() != b.theta.size()) throw ValidationError("data points of different dimension");
  const auto ua = datum_to_unitaries(a.theta);
  const auto ub = datum_to_unitaries(b.theta);
  cplx prod{1.0};
  for (std::size_t k = 0; k < ua.size(); ++k) prod *= (ua[k].adjoint() * ub[k]).trace();
  const double dim = std::ldexp(1.0, static_cast<int>(ua.size()));
  return std::sqrt(std::max(0.0, 2.0 * dim - 2.0 * prod.real()));
}

std::uint64_t dataset_checksum(const Dataset& d) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  auto feed = [&h](std::uint64_t v) {
    for (int i = 0; i < 8; ++i) {
      h ^= (v >> (8 * i)) & 0xffU;
      h *= 0x100000001b3ULL;
    }
  };
  feed(static_cast<std::uint64_t>(d.n));
  for (const auto& p : d.points) {
    feed(static_cast<std::uint64_t>(static_cast<std::int64_t>(p.label)));
    for (double t : p.theta) feed(std::bit_cast<std::uint64_t>(t));
  }
  return h;
}

}  // namespace cokern
