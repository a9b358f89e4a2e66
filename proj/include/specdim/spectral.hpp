#pragma once

#include <complex>
#include <cstddef>
#include <memory>
#include <span>
#include <vector>

namespace specdim {

using Complex = std::complex<double>;
using ComplexVector = std::vector<Complex>;

// Precomputed forward DFT of a fixed length n, X_k = sum_j x_j exp(-2 pi i k j / n).
//
// Lengths are factored into radices 4, 2, 3 and small odd primes, each
// handled by a Cooley-Tukey butterfly. If n has a prime factor larger than
// kMaxDirectRadix the whole transform is evaluated with Bluestein's chirp-z
// algorithm on a power-of-two convolution, so every length runs in
// O(n log n). Output is unnormalized and never padded.
//
// A plan is immutable after construction; execute() may be called from any
// number of threads at once.
class FftPlan {
 public:
  static constexpr std::size_t kMaxDirectRadix = 31;

  explicit FftPlan(std::size_t n);

  std::size_t size() const { return n_; }
  bool uses_bluestein() const { return bluestein_ != nullptr; }
  // Radices in the order they are applied; empty for Bluestein plans.
  const std::vector<std::size_t>& radices() const { return radices_; }

  // `in` and `out` must both have size() elements and must not overlap.
  void execute(std::span<const Complex> in, std::span<Complex> out) const;

  ComplexVector operator()(std::span<const Complex> in) const;
  ComplexVector operator()(std::span<const double> in) const;

 private:
  struct Bluestein;

  void work(Complex* out, const Complex* in, std::size_t fstride, std::size_t level) const;
  void butterfly2(Complex* out, std::size_t fstride, std::size_t m) const;
  void butterfly3(Complex* out, std::size_t fstride, std::size_t m) const;
  void butterfly4(Complex* out, std::size_t fstride, std::size_t m) const;
  void butterfly_generic(Complex* out, std::size_t fstride, std::size_t m, std::size_t p) const;

  std::size_t n_;
  std::vector<std::size_t> radices_;
  std::vector<std::size_t> spans_;  // spans_[i] = n / (radices_[0] * ... * radices_[i])
  ComplexVector twiddles_;          // exp(-2 pi i j / n), j < n
  std::shared_ptr<const Bluestein> bluestein_;
};

// O(n log n) forward DFT. Throws LengthError on empty input and
// NonFiniteError on NaN/Inf components.
ComplexVector fft_forward(std::span<const Complex> input);
ComplexVector fft_forward(std::span<const double> input);

// Literal O(n^2) evaluation of the DFT sum. Reference semantics for
// fft_forward; twiddles are indexed by (k * j) mod n to keep angles small.
ComplexVector dft_direct(std::span<const Complex> input);
ComplexVector dft_direct(std::span<const double> input);

// |X_k| for every component.
std::vector<double> amplitude_spectrum(std::span<const Complex> spectrum);

}  // namespace specdim
