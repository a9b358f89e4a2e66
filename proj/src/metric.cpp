#include "specdim/metric.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>

#include "specdim/error.hpp"

namespace specdim {

namespace {

template <typename T>
void require_same_dim(std::span<const T> a, std::span<const T> b) {
  if (a.size() != b.size()) throw DimensionMismatchError("distance", a.size(), b.size());
}

template <typename T>
double l2_impl(std::span<const T> a, std::span<const T> b) {
  require_same_dim(a, b);
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = static_cast<double>(a[i]) - static_cast<double>(b[i]);
    acc += d * d;
  }
  return std::sqrt(acc);
}

template <typename T>
double cosine_impl(std::span<const T> a, std::span<const T> b) {
  require_same_dim(a, b);
  double dot = 0.0, na = 0.0, nb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double x = a[i], y = b[i];
    dot += x * y;
    na += x * x;
    nb += y * y;
  }
  if (na == 0.0 || nb == 0.0) throw ZeroVectorError("cosine distance is undefined for a zero vector");
  return std::clamp(1.0 - dot / (std::sqrt(na) * std::sqrt(nb)), 0.0, 2.0);
}

}  // namespace

std::string_view to_string(Metric metric) {
  switch (metric) {
    case Metric::L2:
      return "l2";
    case Metric::Cosine:
      return "cosine";
  }
  return "unknown";
}

Metric parse_metric(std::string_view name) {
  std::string lower(name);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (lower == "l2") return Metric::L2;
  if (lower == "cosine") return Metric::Cosine;
  throw ValidationError("unknown metric '" + std::string(name) + "' (expected l2 or cosine)");
}

double l2_distance(std::span<const float> a, std::span<const float> b) { return l2_impl(a, b); }
double l2_distance(std::span<const double> a, std::span<const double> b) { return l2_impl(a, b); }
double cosine_distance(std::span<const float> a, std::span<const float> b) { return cosine_impl(a, b); }
double cosine_distance(std::span<const double> a, std::span<const double> b) { return cosine_impl(a, b); }

double distance(Metric metric, std::span<const float> a, std::span<const float> b) {
  return metric == Metric::L2 ? l2_impl(a, b) : cosine_impl(a, b);
}

double distance(Metric metric, std::span<const double> a, std::span<const double> b) {
  return metric == Metric::L2 ? l2_impl(a, b) : cosine_impl(a, b);
}

}  // namespace specdim
