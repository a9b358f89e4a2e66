#include "specdim/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "specdim/error.hpp"

namespace specdim {

namespace {

Complex unit_root(std::size_t j, std::size_t n) {
  const double angle = -2.0 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(n);
  return {std::cos(angle), std::sin(angle)};
}

std::vector<std::size_t> factorize(std::size_t n) {
  std::vector<std::size_t> radices;
  while (n % 4 == 0) {
    radices.push_back(4);
    n /= 4;
  }
  if (n % 2 == 0) {
    radices.push_back(2);
    n /= 2;
  }
  for (std::size_t p = 3; p * p <= n; p += 2) {
    while (n % p == 0) {
      radices.push_back(p);
      n /= p;
    }
  }
  if (n > 1) radices.push_back(n);
  return radices;
}

std::size_t next_power_of_two(std::size_t n) {
  std::size_t p = 1;
  while (p < n) p <<= 1;
  return p;
}

void require_usable(std::span<const Complex> input, const char* op) {
  if (input.empty()) throw LengthError(std::string(op) + ": input must have at least one element");
  for (const Complex& c : input) {
    if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) {
      throw NonFiniteError(std::string(op) + ": input contains a non-finite component");
    }
  }
}

ComplexVector to_complex(std::span<const double> input) {
  return ComplexVector(input.begin(), input.end());
}

}  // namespace

struct FftPlan::Bluestein {
  explicit Bluestein(std::size_t n) : conv(next_power_of_two(2 * n - 1)), chirp(n), filter(conv.size()) {
    const std::size_t period = 2 * n;
    for (std::size_t k = 0; k < n; ++k) {
      // exp(-i pi k^2 / n); k^2 is reduced mod 2n so the angle stays small.
      const std::size_t sq = (k * k) % period;
      const double angle = -std::numbers::pi * static_cast<double>(sq) / static_cast<double>(n);
      chirp[k] = {std::cos(angle), std::sin(angle)};
    }
    const std::size_t len = conv.size();
    ComplexVector b(len, Complex{});
    b[0] = std::conj(chirp[0]);
    for (std::size_t k = 1; k < n; ++k) {
      b[k] = std::conj(chirp[k]);
      b[len - k] = b[k];
    }
    conv.execute(b, filter);
  }

  FftPlan conv;
  ComplexVector chirp;
  ComplexVector filter;  // forward transform of the conjugate chirp
};

FftPlan::FftPlan(std::size_t n) : n_(n) {
  if (n == 0) throw LengthError("FftPlan: length must be at least 1");
  auto radices = factorize(n);
  const bool needs_bluestein =
      std::any_of(radices.begin(), radices.end(), [](std::size_t p) { return p > kMaxDirectRadix; });
  if (needs_bluestein) {
    bluestein_ = std::make_shared<const Bluestein>(n);
    return;
  }
  radices_ = std::move(radices);
  std::size_t remaining = n;
  for (std::size_t p : radices_) {
    remaining /= p;
    spans_.push_back(remaining);
  }
  twiddles_.resize(n);
  for (std::size_t j = 0; j < n; ++j) twiddles_[j] = unit_root(j, n);
}

void FftPlan::execute(std::span<const Complex> in, std::span<Complex> out) const {
  if (in.size() != n_ || out.size() != n_) {
    throw LengthError("FftPlan::execute: buffers must have length " + std::to_string(n_));
  }
  if (bluestein_) {
    const Bluestein& bs = *bluestein_;
    const std::size_t len = bs.conv.size();
    ComplexVector a(len, Complex{});
    for (std::size_t k = 0; k < n_; ++k) a[k] = in[k] * bs.chirp[k];
    ComplexVector spectrum(len);
    bs.conv.execute(a, spectrum);
    // Inverse transform through the conjugation identity.
    for (std::size_t k = 0; k < len; ++k) a[k] = std::conj(spectrum[k] * bs.filter[k]);
    bs.conv.execute(a, spectrum);
    const double scale = 1.0 / static_cast<double>(len);
    for (std::size_t k = 0; k < n_; ++k) out[k] = bs.chirp[k] * std::conj(spectrum[k]) * scale;
    return;
  }
  if (n_ == 1) {
    out[0] = in[0];
    return;
  }
  work(out.data(), in.data(), 1, 0);
}

ComplexVector FftPlan::operator()(std::span<const Complex> in) const {
  ComplexVector out(n_);
  execute(in, out);
  return out;
}

ComplexVector FftPlan::operator()(std::span<const double> in) const {
  const ComplexVector buf = to_complex(in);
  return (*this)(std::span<const Complex>(buf));
}

void FftPlan::work(Complex* out, const Complex* in, std::size_t fstride, std::size_t level) const {
  const std::size_t p = radices_[level];
  const std::size_t m = spans_[level];
  Complex* const out_end = out + p * m;

  if (m == 1) {
    for (Complex* o = out; o != out_end; ++o, in += fstride) *o = *in;
  } else {
    // Decimation in time: each of the p interleaved subsequences is
    // transformed recursively into a contiguous block of length m.
    for (Complex* o = out; o != out_end; o += m, in += fstride) work(o, in, fstride * p, level + 1);
  }

  switch (p) {
    case 2:
      butterfly2(out, fstride, m);
      break;
    case 3:
      butterfly3(out, fstride, m);
      break;
    case 4:
      butterfly4(out, fstride, m);
      break;
    default:
      butterfly_generic(out, fstride, m, p);
      break;
  }
}

void FftPlan::butterfly2(Complex* out, std::size_t fstride, std::size_t m) const {
  Complex* out2 = out + m;
  for (std::size_t k = 0; k < m; ++k) {
    const Complex t = out2[k] * twiddles_[k * fstride];
    out2[k] = out[k] - t;
    out[k] += t;
  }
}

void FftPlan::butterfly3(Complex* out, std::size_t fstride, std::size_t m) const {
  const double sin_third = twiddles_[fstride * m].imag();  // -sqrt(3)/2
  for (std::size_t k = 0; k < m; ++k) {
    const Complex s1 = out[k + m] * twiddles_[k * fstride];
    const Complex s2 = out[k + 2 * m] * twiddles_[2 * k * fstride];
    const Complex sum = s1 + s2;
    const Complex diff = (s1 - s2) * sin_third;
    const Complex base = out[k] - 0.5 * sum;
    out[k] += sum;
    out[k + m] = {base.real() - diff.imag(), base.imag() + diff.real()};
    out[k + 2 * m] = {base.real() + diff.imag(), base.imag() - diff.real()};
  }
}

void FftPlan::butterfly4(Complex* out, std::size_t fstride, std::size_t m) const {
  for (std::size_t k = 0; k < m; ++k) {
    const Complex s0 = out[k + m] * twiddles_[k * fstride];
    const Complex s1 = out[k + 2 * m] * twiddles_[2 * k * fstride];
    const Complex s2 = out[k + 3 * m] * twiddles_[3 * k * fstride];
    const Complex s5 = out[k] - s1;
    const Complex even = out[k] + s1;
    const Complex s3 = s0 + s2;
    const Complex s4 = s0 - s2;
    out[k] = even + s3;
    out[k + 2 * m] = even - s3;
    // s5 -/+ i * s4
    out[k + m] = {s5.real() + s4.imag(), s5.imag() - s4.real()};
    out[k + 3 * m] = {s5.real() - s4.imag(), s5.imag() + s4.real()};
  }
}

void FftPlan::butterfly_generic(Complex* out, std::size_t fstride, std::size_t m, std::size_t p) const {
  Complex scratch[kMaxDirectRadix];
  for (std::size_t u = 0; u < m; ++u) {
    for (std::size_t q = 0; q < p; ++q) scratch[q] = out[u + q * m];
    for (std::size_t q1 = 0; q1 < p; ++q1) {
      const std::size_t k = u + q1 * m;
      const std::size_t step = fstride * k % n_;
      std::size_t tw = 0;
      Complex acc = scratch[0];
      for (std::size_t q = 1; q < p; ++q) {
        tw += step;
        if (tw >= n_) tw -= n_;
        acc += scratch[q] * twiddles_[tw];
      }
      out[k] = acc;
    }
  }
}

ComplexVector fft_forward(std::span<const Complex> input) {
  require_usable(input, "fft_forward");
  return FftPlan(input.size())(input);
}

ComplexVector fft_forward(std::span<const double> input) {
  const ComplexVector buf = to_complex(input);
  return fft_forward(std::span<const Complex>(buf));
}

ComplexVector dft_direct(std::span<const Complex> input) {
  require_usable(input, "dft_direct");
  const std::size_t n = input.size();
  ComplexVector roots(n);
  for (std::size_t j = 0; j < n; ++j) roots[j] = unit_root(j, n);
  ComplexVector out(n);
  for (std::size_t k = 0; k < n; ++k) {
    Complex acc{};
    for (std::size_t j = 0; j < n; ++j) acc += input[j] * roots[(k * j) % n];
    out[k] = acc;
  }
  return out;
}

ComplexVector dft_direct(std::span<const double> input) {
  const ComplexVector buf = to_complex(input);
  return dft_direct(std::span<const Complex>(buf));
}

std::vector<double> amplitude_spectrum(std::span<const Complex> spectrum) {
  require_usable(spectrum, "amplitude_spectrum");
  std::vector<double> out(spectrum.size());
  std::transform(spectrum.begin(), spectrum.end(), out.begin(), [](const Complex& c) { return std::abs(c); });
  return out;
}

}  // namespace specdim
