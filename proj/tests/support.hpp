#pragma once

// Shared fixtures: seeded random rasters and scratch directories.

#include <atomic>
#include <cstdint>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include <unistd.h>

#include "hspan/core/container.hpp"
#include "hspan/core/types.hpp"
#include "hspan/raster/convolve.hpp"
#include "hspan/raster/kernel.hpp"

namespace hspan::test {

inline std::vector<double> wavelengths(std::size_t bands, double first = 450.0, double step = 10.0) {
  std::vector<double> w(bands);
  for (std::size_t b = 0; b < bands; ++b) w[b] = first + step * static_cast<double>(b);
  return w;
}

inline std::vector<float> uniform_samples(std::size_t n, std::uint64_t seed, double lo = 0.05,
                                          double hi = 1.0) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(lo, hi);
  std::vector<float> s(n);
  for (float& v : s) v = static_cast<float>(u(rng));
  return s;
}

inline HyperCube random_cube(std::size_t w, std::size_t h, std::size_t bands, std::uint64_t seed,
                             double gsd = 30.0, double lo = 0.05, double hi = 1.0) {
  return HyperCube(make_meta(w, h, wavelengths(bands), gsd), uniform_samples(w * h * bands, seed, lo, hi));
}

inline PanImage random_pan(std::size_t w, std::size_t h, std::uint64_t seed, double gsd = 5.0) {
  return PanImage(make_meta(w, h, {550.0}, gsd), uniform_samples(w * h, seed));
}

inline HyperCube constant_cube(std::size_t w, std::size_t h, std::size_t bands, float value,
                               double gsd = 30.0) {
  return HyperCube(make_meta(w, h, wavelengths(bands), gsd), std::vector<float>(w * h * bands, value));
}

/// Random field low-passed with a Gaussian of the given sigma, mapped to
/// [0.1, 1.1].
inline Grid<double> smooth_field(std::size_t w, std::size_t h, double sigma, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> n(0.0, 1.0);
  Grid<double> g(w, h);
  for (double& v : g.samples()) v = n(rng);
  const int size = 2 * static_cast<int>(std::ceil(3.0 * sigma)) + 1;
  auto out = convolve_reflect(g.view(), Kernel2D::separable(detail::gaussian_factor(sigma, size)));
  double lo = out.samples()[0], hi = lo;
  for (double v : out.samples()) lo = std::min(lo, v), hi = std::max(hi, v);
  for (double& v : out.samples()) v = 0.1 + (v - lo) / (hi - lo);
  return out;
}

inline HyperCube smooth_cube(std::size_t w, std::size_t h, std::size_t bands, double sigma,
                             std::uint64_t seed, double gsd = 30.0) {
  std::vector<Grid<double>> bs;
  for (std::size_t b = 0; b < bands; ++b) bs.push_back(smooth_field(w, h, sigma, seed * 131 + b));
  return HyperCube::from_bands(make_meta(w, h, wavelengths(bands), gsd), bs);
}

/// Unique scratch directory under the system temp dir, removed on scope exit.
class TempDir {
 public:
  TempDir() {
    static std::atomic<int> counter{0};
    path_ = std::filesystem::temp_directory_path() /
            ("hspan_test_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& s) const { return path_ / s; }

 private:
  std::filesystem::path path_;
};

}  // namespace hspan::test
