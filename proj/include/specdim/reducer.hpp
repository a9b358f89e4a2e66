#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "specdim/spectral.hpp"

namespace specdim {

// Source and target sizes of a spectral reduction, 1 <= target_dim <= source_dim.
struct ReductionSpec {
  std::size_t source_dim = 0;
  std::size_t target_dim = 0;
  std::optional<double> factor;  // set when built from a reduction factor

  // N / M, the size ratio between the original and reduced representations.
  double ratio() const { return static_cast<double>(source_dim) / static_cast<double>(target_dim); }

  bool operator==(const ReductionSpec&) const = default;
};

// target_dim = floor(source_dim / factor). Throws InvalidSpecError when
// factor < 1 (or not finite) or the result would have no dimensions.
ReductionSpec make_spec(std::size_t source_dim, double factor);

// Spec with an explicit target size.
ReductionSpec make_spec_for_target(std::size_t source_dim, std::size_t target_dim);

// Truncated amplitude spectrum of one embedding.
struct SpectrumVector {
  std::vector<double> amplitudes;
  ReductionSpec spec;

  std::size_t source_dim() const { return spec.source_dim; }
};

// Keeps the first target_dim amplitudes (the lowest frequency indices),
// order preserved, no rescaling.
SpectrumVector reduce(std::span<const double> amplitudes, const ReductionSpec& spec);

SpectrumVector transform_embedding(std::span<const double> embedding, const ReductionSpec& spec);
SpectrumVector transform_embedding(std::span<const float> embedding, const ReductionSpec& spec);

// Reusable embedding -> truncated amplitude transform for a fixed spec.
// Holds one FFT plan so batches avoid re-planning; const and thread-safe.
class SpectralReducer {
 public:
  explicit SpectralReducer(ReductionSpec spec);

  const ReductionSpec& spec() const { return spec_; }

  SpectrumVector operator()(std::span<const double> embedding) const;
  SpectrumVector operator()(std::span<const float> embedding) const;

  // Same as operator() but returns single precision amplitudes, the storage
  // type of the vector index.
  std::vector<float> reduce_to_f32(std::span<const float> embedding) const;

 private:
  ReductionSpec spec_;
  FftPlan plan_;
};

}  // namespace specdim
