#pragma once

// Labeling-cosets-with-error benchmark data.

#include <cstdint>
#include <span>
#include <vector>

#include "cokern/graph.hpp"
#include "cokern/group.hpp"
#include "cokern/rng.hpp"

namespace cokern {

struct LceProblem {
  CouplingGraph graph;
  StabilizerGroup stabilizer;
  /// Representative angles, 2n entries each, in [-pi/2, pi/2].
  std::vector<double> c_plus;
  std::vector<double> c_minus;
  std::uint64_t seed = 0;

  int num_qubits() const { return graph.num_vertices(); }
  const std::vector<double>& representative(int label) const { return label > 0 ? c_plus : c_minus; }
};

struct DataPoint {
  /// Euler angles (theta1, theta2) per qubit, theta3 fixed to 0.
  std::vector<double> theta;
  int label = 1;

  int num_qubits() const { return static_cast<int>(theta.size() / 2); }
  friend bool operator==(const DataPoint&, const DataPoint&) = default;
};

struct Dataset {
  std::vector<DataPoint> points;
  int n = 0;
  std::uint64_t problem_seed = 0;
  std::uint64_t seed = 0;
  double epsilon = 0.0;
  int count_minus = 0;
  int count_plus = 0;

  std::size_t size() const { return points.size(); }
  std::vector<int> labels() const;
  /// Throws ValidationError if points disagree on n, labels are not +-1,
  /// angles are non-finite, or the per-label counts are off.
  void validate() const;
};

/// c_+ and c_- drawn i.i.d. uniform on [-pi/2, pi/2] from `seed`.
LceProblem new_problem(const CouplingGraph& graph, std::uint64_t seed);
/// Rebuilds a problem from stored representatives (problem files).
LceProblem make_problem(const CouplingGraph& graph, std::vector<double> c_plus, std::vector<double> c_minus,
                        std::uint64_t seed);

/// Coset element c_label * s composed per qubit, then every angle gets
/// Normal noise with variance epsilon (standard deviation sqrt(epsilon)).
DataPoint sample_datum(const LceProblem& p, int label, double epsilon, Rng& rng);
/// As above with the stabilizer element fixed by the caller.
DataPoint sample_datum(const LceProblem& p, int label, double epsilon, const PauliString& s, Rng& rng);

/// m_per_label points per class; all -1 points first, then all +1 points.
/// Point i draws from its own stream derive_seed(seed, {i}).
Dataset generate_dataset(const LceProblem& p, int m_per_label, double epsilon, std::uint64_t seed);

/// Frobenius distance between the product unitaries of a and b, computed
/// from per-qubit traces without forming 2^n x 2^n matrices.
double representation_distance(const DataPoint& a, const DataPoint& b);

/// FNV-1a over labels and the exact bit patterns of all angles.
std::uint64_t dataset_checksum(const Dataset& d);

}  // namespace cokern
