#pragma once

#include <cmath>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "hspan/core/error.hpp"

namespace hspan {

enum class MtfShape {
  gaussian,  // MTF-matched Gaussian with the given Nyquist gain
  ideal,     // windowed-sinc approximation of an ideal low-pass at the reduced Nyquist
};

/// Sensor MTF model used for every degradation (RR simulation and D_lambda).
struct MtfSpec {
  double nyquist_gain = 0.3;
  int ratio = 6;
  int kernel_size = 41;
  MtfShape shape = MtfShape::gaussian;

  void validate() const {
    detail::require(ratio >= 2, "mtf: ratio must be >= 2");
    detail::require(kernel_size % 2 == 1, "mtf: kernel_size must be odd");
    detail::require(kernel_size >= 2 * ratio + 1, "mtf: kernel_size must be >= 2*ratio+1");
    if (shape == MtfShape::gaussian)
      detail::require(nyquist_gain > 0.0 && nyquist_gain < 1.0,
                      "mtf: nyquist_gain must be in (0,1)");
  }
};

/// Square convolution kernel. Separable kernels also keep their 1-D factor so
/// filtering can run as two passes.
class Kernel2D {
 public:
  static Kernel2D separable(std::vector<double> factor) {
    detail::require(factor.size() % 2 == 1, "kernel: size must be odd");
    const std::size_t n = factor.size();
    std::vector<double> c(n * n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) c[i * n + j] = factor[i] * factor[j];
    Kernel2D k(n, std::move(c));
    k.factor_ = std::move(factor);
    return k;
  }

  static Kernel2D dense(std::size_t size, std::vector<double> coefficients) {
    detail::require(size % 2 == 1, "kernel: size must be odd");
    detail::require(coefficients.size() == size * size, "kernel: coefficient count != size^2");
    return Kernel2D(size, std::move(coefficients));
  }

  std::size_t size() const { return size_; }
  std::size_t radius() const { return size_ / 2; }
  double operator()(std::size_t row, std::size_t col) const { return coeffs_[row * size_ + col]; }
  const std::vector<double>& coefficients() const { return coeffs_; }
  const std::optional<std::vector<double>>& separable_factor() const { return factor_; }

  double sum() const {
    double s = 0.0;
    for (double c : coeffs_) s += c;
    return s;
  }

 private:
  Kernel2D(std::size_t size, std::vector<double> c) : size_(size), coeffs_(std::move(c)) {}

  std::size_t size_ = 0;
  std::vector<double> coeffs_;
  std::optional<std::vector<double>> factor_;
};

/// Spatial standard deviation (pixels) of the Gaussian whose continuous
/// frequency response equals `nyquist_gain` at 1/(2*ratio) cycles/sample.
inline double mtf_gaussian_sigma(double nyquist_gain, int ratio) {
  return ratio * std::sqrt(-2.0 * std::log(nyquist_gain) / (std::numbers::pi * std::numbers::pi));
}

namespace detail {

inline std::vector<double> normalized(std::vector<double> v) {
  double s = 0.0;
  for (double x : v) s += x;
  for (double& x : v) x /= s;
  return v;
}

inline std::vector<double> gaussian_factor(double sigma, int size) {
  const int radius = size / 2;
  std::vector<double> f(static_cast<std::size_t>(size));
  for (int i = -radius; i <= radius; ++i)
    f[static_cast<std::size_t>(i + radius)] = std::exp(-0.5 * i * i / (sigma * sigma));
  return normalized(std::move(f));
}

// Hamming-windowed sinc with cutoff 1/(2*ratio) cycles/sample.
inline std::vector<double> ideal_lowpass_factor(int ratio, int size) {
  const int radius = size / 2;
  const double fc = 0.5 / ratio;
  std::vector<double> f(static_cast<std::size_t>(size));
  for (int i = -radius; i <= radius; ++i) {
    const double x = 2.0 * fc * i;
    const double sinc = i == 0 ? 1.0 : std::sin(std::numbers::pi * x) / (std::numbers::pi * x);
    const double window = 0.54 + 0.46 * std::cos(std::numbers::pi * i / (radius + 1));
    f[static_cast<std::size_t>(i + radius)] = 2.0 * fc * sinc * window;
  }
  return normalized(std::move(f));
}

}  // namespace detail

/// Separable low-pass kernel modeling the sensor MTF. Coefficients sum to 1.
inline Kernel2D mtf_gaussian_kernel(const MtfSpec& spec) {
  spec.validate();
  if (spec.shape == MtfShape::ideal)
    return Kernel2D::separable(detail::ideal_lowpass_factor(spec.ratio, spec.kernel_size));

  const double sigma = mtf_gaussian_sigma(spec.nyquist_gain, spec.ratio);
  // Continuous Gaussian mass falling outside the (size x size) window.
  const double half_width = spec.kernel_size / 2 + 0.5;
  const double outside_1d = std::erfc(half_width / (sigma * std::numbers::sqrt2));
  const double outside_2d = 1.0 - (1.0 - outside_1d) * (1.0 - outside_1d);
  if (outside_2d > 1e-3)
    throw ValidationError("mtf: kernel_size " + std::to_string(spec.kernel_size) +
                          " too small for sigma " + std::to_string(sigma) +
                          " (mass outside window " + std::to_string(outside_2d) + ")");
  return Kernel2D::separable(detail::gaussian_factor(sigma, spec.kernel_size));
}

/// High-pass detail filter used by SCC; coefficients sum to exactly 0.
inline Kernel2D scc_highpass_kernel() {
  return Kernel2D::dense(3, {-1, -1, -1, -1, 8, -1, -1, -1, -1});
}

}  // namespace hspan
