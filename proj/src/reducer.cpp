#include "specdim/reducer.hpp"

#include <cmath>
#include <string>

#include "specdim/error.hpp"

namespace specdim {

namespace {

void validate(const ReductionSpec& spec) {
  if (spec.source_dim == 0) throw InvalidSpecError("reduction spec: source_dim must be at least 1");
  if (spec.target_dim == 0 || spec.target_dim > spec.source_dim) {
    throw InvalidSpecError("reduction spec: target_dim " + std::to_string(spec.target_dim) +
                           " outside [1, " + std::to_string(spec.source_dim) + "]");
  }
}

std::vector<double> widen(std::span<const float> v) { return {v.begin(), v.end()}; }

}  // namespace

ReductionSpec make_spec(std::size_t source_dim, double factor) {
  if (source_dim == 0) throw InvalidSpecError("make_spec: source_dim must be at least 1");
  if (!std::isfinite(factor) || factor < 1.0) {
    throw InvalidSpecError("make_spec: reduction factor must be a finite number >= 1, got " +
                           std::to_string(factor));
  }
  // Floor, not round: 768 / 5 = 153.6 must give 153.
  const double target = std::floor(static_cast<double>(source_dim) / factor);
  if (target < 1.0) {
    throw InvalidSpecError("make_spec: factor " + std::to_string(factor) + " leaves no dimensions of " +
                           std::to_string(source_dim));
  }
  return {source_dim, static_cast<std::size_t>(target), factor};
}

ReductionSpec make_spec_for_target(std::size_t source_dim, std::size_t target_dim) {
  ReductionSpec spec{source_dim, target_dim, std::nullopt};
  validate(spec);
  return spec;
}

SpectrumVector reduce(std::span<const double> amplitudes, const ReductionSpec& spec) {
  validate(spec);
  if (amplitudes.size() != spec.source_dim) {
    throw DimensionMismatchError("reduce", spec.source_dim, amplitudes.size());
  }
  return {{amplitudes.begin(), amplitudes.begin() + static_cast<std::ptrdiff_t>(spec.target_dim)}, spec};
}

SpectrumVector transform_embedding(std::span<const double> embedding, const ReductionSpec& spec) {
  validate(spec);
  if (embedding.size() != spec.source_dim) {
    throw DimensionMismatchError("transform_embedding", spec.source_dim, embedding.size());
  }
  return reduce(amplitude_spectrum(fft_forward(embedding)), spec);
}

SpectrumVector transform_embedding(std::span<const float> embedding, const ReductionSpec& spec) {
  const auto wide = widen(embedding);
  return transform_embedding(std::span<const double>(wide), spec);
}

SpectralReducer::SpectralReducer(ReductionSpec spec)
    : spec_((validate(spec), spec)), plan_(spec.source_dim) {}

SpectrumVector SpectralReducer::operator()(std::span<const double> embedding) const {
  if (embedding.size() != spec_.source_dim) {
    throw DimensionMismatchError("SpectralReducer", spec_.source_dim, embedding.size());
  }
  ComplexVector buf(embedding.begin(), embedding.end());
  for (const Complex& c : buf) {
    if (!std::isfinite(c.real())) throw NonFiniteError("SpectralReducer: embedding contains a non-finite value");
  }
  const ComplexVector spectrum = plan_(std::span<const Complex>(buf));
  SpectrumVector out{std::vector<double>(spec_.target_dim), spec_};
  for (std::size_t k = 0; k < spec_.target_dim; ++k) out.amplitudes[k] = std::abs(spectrum[k]);
  return out;
}

SpectrumVector SpectralReducer::operator()(std::span<const float> embedding) const {
  const auto wide = widen(embedding);
  return (*this)(std::span<const double>(wide));
}

std::vector<float> SpectralReducer::reduce_to_f32(std::span<const float> embedding) const {
  const SpectrumVector s = (*this)(embedding);
  return {s.amplitudes.begin(), s.amplitudes.end()};
}

}  // namespace specdim
