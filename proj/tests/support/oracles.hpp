#pragma once

// Test-only reference implementations. These deliberately avoid the library
// code paths they are used to check.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <random>
#include <span>
#include <utility>
#include <vector>

#include "specdim/metric.hpp"
#include "specdim/store.hpp"

namespace specdim::testing {

inline std::vector<double> random_real(std::size_t n, std::uint64_t seed, double lo = -1.0, double hi = 1.0) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(lo, hi);
  std::vector<double> v(n);
  for (double& x : v) x = dist(rng);
  return v;
}

inline std::vector<std::complex<double>> random_complex(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  std::vector<std::complex<double>> v(n);
  for (auto& x : v) x = {dist(rng), dist(rng)};
  return v;
}

inline std::vector<float> random_float(std::size_t n, std::mt19937_64& rng) {
  std::uniform_real_distribution<float> dist(-1.0f, 1.0f);
  std::vector<float> v(n);
  for (float& x : v) x = dist(rng);
  return v;
}

inline std::vector<EmbeddingRecord> random_records(std::size_t count, std::size_t dim, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<EmbeddingRecord> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    out.push_back({i, "doc#" + std::to_string(i), random_float(dim, rng), ""});
  }
  return out;
}

// DFT in long double with angles computed from the exact integer phase.
inline std::vector<std::complex<long double>> long_double_dft(std::span<const std::complex<double>> x) {
  const std::size_t n = x.size();
  std::vector<std::complex<long double>> out(n);
  const long double two_pi = 2.0L * std::numbers::pi_v<long double>;
  for (std::size_t k = 0; k < n; ++k) {
    std::complex<long double> acc{};
    for (std::size_t j = 0; j < n; ++j) {
      const long double angle = -two_pi * static_cast<long double>((k * j) % n) / static_cast<long double>(n);
      acc += std::complex<long double>(x[j].real(), x[j].imag()) *
             std::complex<long double>(std::cos(angle), std::sin(angle));
    }
    out[k] = acc;
  }
  return out;
}

inline double max_abs_diff(std::span<const std::complex<double>> a, std::span<const std::complex<double>> b) {
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) worst = std::max(worst, std::abs(a[i] - b[i]));
  return worst;
}

// Brute force top-k: every distance through the metric functions, full sort
// on (distance, id), then truncate.
inline std::vector<std::pair<double, std::uint64_t>> full_sort_search(const std::vector<EmbeddingRecord>& records,
                                                                      std::span<const float> query, Metric metric,
                                                                      std::size_t k) {
  std::vector<std::pair<double, std::uint64_t>> all;
  all.reserve(records.size());
  for (const auto& r : records) all.emplace_back(distance(metric, query, std::span<const float>(r.vector)), r.id);
  std::sort(all.begin(), all.end());
  all.resize(std::min(k, all.size()));
  return all;
}

}  // namespace specdim::testing
