#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "specdim/metric.hpp"

namespace specdim {

// Symmetric, zero-diagonal matrix of non-negative finite dissimilarities.
class DistanceMatrix {
 public:
  DistanceMatrix() = default;
  explicit DistanceMatrix(std::size_t n) : n_(n), values_(n * n, 0.0) {}

  // Throws ValidationError unless rows form a valid distance matrix.
  static DistanceMatrix from_rows(const std::vector<std::vector<double>>& rows);

  std::size_t size() const { return n_; }
  double operator()(std::size_t i, std::size_t j) const { return values_[i * n_ + j]; }
  // Sets both (i, j) and (j, i).
  void set(std::size_t i, std::size_t j, double v) {
    values_[i * n_ + j] = v;
    values_[j * n_ + i] = v;
  }

  // Throws ValidationError on asymmetry, a non-zero diagonal, or negative / non-finite entries.
  void validate() const;

 private:
  std::size_t n_ = 0;
  std::vector<double> values_;
};

using Point2 = std::array<double, 2>;

struct MdsOptions {
  std::uint64_t seed = 0;
  std::size_t max_iter = 300;
  double eps = 1e-6;         // stop when the relative stress decrease falls below this
  std::size_t restarts = 1;  // independent seeded starts; the lowest stress wins
};

struct MdsResult {
  std::vector<Point2> coordinates;  // centered, column means 0
  double stress = 0.0;              // raw: sum_{i<j} (d_ij - delta_ij)^2
  std::size_t iterations = 0;
  bool converged = false;
  std::vector<double> stress_trace;  // initial configuration first, one entry per accepted step
};

// Metric SMACOF (stress majorization via the Guttman transform) into two
// dimensions from a seeded uniform random start.
MdsResult mds_project(const DistanceMatrix& delta, const MdsOptions& options = {});

double raw_stress(const DistanceMatrix& delta, std::span<const Point2> coords);
DistanceMatrix euclidean_distances(std::span<const Point2> coords);

// values[i][j] = metric(v_i, v_j). Throws EmptyInputError / DimensionMismatchError.
DistanceMatrix pairwise_distances(std::span<const std::vector<float>> vectors, Metric metric);
DistanceMatrix pairwise_distances(std::span<const std::vector<double>> vectors, Metric metric);

}  // namespace specdim
