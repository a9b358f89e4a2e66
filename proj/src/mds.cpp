#include "specdim/mds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <string>

#include "specdim/error.hpp"

namespace specdim {

namespace {

constexpr double kSymmetryTolerance = 1e-9;

double uniform01(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * (1.0 / 9007199254740992.0); }

void center(std::vector<Point2>& coords) {
  double mx = 0.0, my = 0.0;
  for (const auto& p : coords) {
    mx += p[0];
    my += p[1];
  }
  mx /= static_cast<double>(coords.size());
  my /= static_cast<double>(coords.size());
  for (auto& p : coords) {
    p[0] -= mx;
    p[1] -= my;
  }
}

MdsResult smacof_single(const DistanceMatrix& delta, std::uint64_t seed, std::size_t max_iter, double eps) {
  const std::size_t n = delta.size();
  std::mt19937_64 rng(seed);
  std::vector<Point2> x(n);
  for (auto& p : x) {
    p[0] = uniform01(rng);
    p[1] = uniform01(rng);
  }

  MdsResult res;
  double stress = raw_stress(delta, x);
  res.stress_trace.push_back(stress);

  std::vector<Point2> next(n);
  std::vector<double> b(n);
  for (std::size_t it = 0; it < max_iter && stress > 0.0; ++it) {
    // Guttman transform: X <- B(X) X / n.
    for (std::size_t i = 0; i < n; ++i) {
      double diag = 0.0;
      for (std::size_t j = 0; j < n; ++j) {
        if (j == i) continue;
        const double dx = x[i][0] - x[j][0];
        const double dy = x[i][1] - x[j][1];
        const double d = std::sqrt(dx * dx + dy * dy);
        b[j] = d > 0.0 ? -delta(i, j) / d : 0.0;
        diag -= b[j];
      }
      b[i] = diag;
      double sx = 0.0, sy = 0.0;
      for (std::size_t j = 0; j < n; ++j) {
        sx += b[j] * x[j][0];
        sy += b[j] * x[j][1];
      }
      next[i] = {sx / static_cast<double>(n), sy / static_cast<double>(n)};
    }
    const double next_stress = raw_stress(delta, next);
    // Majorization cannot increase stress; an increase is rounding at the floor.
    if (next_stress > stress) {
      res.converged = true;
      break;
    }
    const double decrease = stress - next_stress;
    x.swap(next);
    ++res.iterations;
    res.stress_trace.push_back(next_stress);
    const double previous = stress;
    stress = next_stress;
    if (stress == 0.0 || decrease / previous < eps) {
      res.converged = true;
      break;
    }
  }
  if (stress == 0.0) res.converged = true;

  center(x);
  res.coordinates = std::move(x);
  res.stress = raw_stress(delta, res.coordinates);
  return res;
}

template <typename T>
DistanceMatrix pairwise_impl(std::span<const std::vector<T>> vectors, Metric metric) {
  if (vectors.empty()) throw EmptyInputError("pairwise_distances: no vectors");
  const std::size_t dim = vectors.front().size();
  for (std::size_t i = 0; i < vectors.size(); ++i) {
    if (vectors[i].size() != dim) {
      throw DimensionMismatchError("pairwise_distances: vector " + std::to_string(i), dim, vectors[i].size());
    }
  }
  DistanceMatrix out(vectors.size());
  for (std::size_t i = 0; i < vectors.size(); ++i) {
    for (std::size_t j = i + 1; j < vectors.size(); ++j) {
      out.set(i, j, distance(metric, std::span<const T>(vectors[i]), std::span<const T>(vectors[j])));
    }
  }
  return out;
}

}  // namespace

DistanceMatrix DistanceMatrix::from_rows(const std::vector<std::vector<double>>& rows) {
  DistanceMatrix m(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != rows.size()) {
      throw ValidationError("distance matrix: row " + std::to_string(i) + " has " + std::to_string(rows[i].size()) +
                            " entries, expected " + std::to_string(rows.size()));
    }
    for (std::size_t j = 0; j < rows.size(); ++j) m.values_[i * m.n_ + j] = rows[i][j];
  }
  m.validate();
  return m;
}

void DistanceMatrix::validate() const {
  for (std::size_t i = 0; i < n_; ++i) {
    if ((*this)(i, i) != 0.0) throw ValidationError("distance matrix: non-zero diagonal at " + std::to_string(i));
    for (std::size_t j = 0; j < n_; ++j) {
      const double a = (*this)(i, j);
      const double b = (*this)(j, i);
      if (!std::isfinite(a) || a < 0.0) {
        throw ValidationError("distance matrix: entry (" + std::to_string(i) + ", " + std::to_string(j) +
                              ") is negative or not finite");
      }
      if (std::abs(a - b) > kSymmetryTolerance * std::max({1.0, a, b})) {
        throw ValidationError("distance matrix: not symmetric at (" + std::to_string(i) + ", " + std::to_string(j) +
                              ")");
      }
    }
  }
}

double raw_stress(const DistanceMatrix& delta, std::span<const Point2> coords) {
  double s = 0.0;
  for (std::size_t i = 0; i < coords.size(); ++i) {
    for (std::size_t j = i + 1; j < coords.size(); ++j) {
      const double dx = coords[i][0] - coords[j][0];
      const double dy = coords[i][1] - coords[j][1];
      const double r = std::sqrt(dx * dx + dy * dy) - delta(i, j);
      s += r * r;
    }
  }
  return s;
}

DistanceMatrix euclidean_distances(std::span<const Point2> coords) {
  DistanceMatrix out(coords.size());
  for (std::size_t i = 0; i < coords.size(); ++i) {
    for (std::size_t j = i + 1; j < coords.size(); ++j) {
      out.set(i, j, std::hypot(coords[i][0] - coords[j][0], coords[i][1] - coords[j][1]));
    }
  }
  return out;
}

MdsResult mds_project(const DistanceMatrix& delta, const MdsOptions& options) {
  delta.validate();
  if (delta.size() < 2) throw ValidationError("mds_project: need at least 2 points");
  if (options.max_iter == 0) throw ValidationError("mds_project: max_iter must be at least 1");
  if (!(options.eps >= 0.0)) throw ValidationError("mds_project: eps must be non-negative");
  if (options.restarts == 0) throw ValidationError("mds_project: restarts must be at least 1");

  MdsResult best;
  best.stress = std::numeric_limits<double>::infinity();
  for (std::size_t r = 0; r < options.restarts; ++r) {
    MdsResult run = smacof_single(delta, options.seed + r, options.max_iter, options.eps);
    if (run.stress < best.stress) best = std::move(run);
  }
  return best;
}

DistanceMatrix pairwise_distances(std::span<const std::vector<float>> vectors, Metric metric) {
  return pairwise_impl(vectors, metric);
}

DistanceMatrix pairwise_distances(std::span<const std::vector<double>> vectors, Metric metric) {
  return pairwise_impl(vectors, metric);
}

}  // namespace specdim
