#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>

namespace specdim {

enum class Metric : std::uint8_t { L2 = 0, Cosine = 1 };

std::string_view to_string(Metric metric);
// Accepts "l2" and "cosine" (case-insensitive); throws ValidationError otherwise.
Metric parse_metric(std::string_view name);

// Euclidean distance, accumulated in double.
double l2_distance(std::span<const float> a, std::span<const float> b);
double l2_distance(std::span<const double> a, std::span<const double> b);

// 1 - cos(a, b), clamped to [0, 2]. Throws ZeroVectorError if either vector is zero.
double cosine_distance(std::span<const float> a, std::span<const float> b);
double cosine_distance(std::span<const double> a, std::span<const double> b);

double distance(Metric metric, std::span<const float> a, std::span<const float> b);
double distance(Metric metric, std::span<const double> a, std::span<const double> b);

}  // namespace specdim
