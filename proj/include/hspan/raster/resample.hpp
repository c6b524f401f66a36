#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <vector>

#include "hspan/core/grid.hpp"
#include "hspan/raster/convolve.hpp"
#include "hspan/raster/kernel.hpp"

namespace hspan {

/// Keeps the center sample of every ratio x ratio block, at offset
/// floor(ratio/2) inside the block.
template <class T>
Grid<T> decimate(GridView<const T> band, int ratio) {
  detail::require(ratio >= 1, "decimate: ratio must be >= 1");
  const auto r = static_cast<std::size_t>(ratio);
  detail::require(band.width % r == 0 && band.height % r == 0,
                  "decimate: non-divisible dimensions");
  const std::size_t off = r / 2;
  Grid<T> out(band.width / r, band.height / r);
  for (std::size_t i = 0; i < out.height(); ++i)
    for (std::size_t j = 0; j < out.width(); ++j) out(i, j) = band(i * r + off, j * r + off);
  return out;
}

/// MTF low-pass followed by decimation. Only the retained samples are
/// filtered; the result is bit-identical to decimate(convolve_reflect(...)).
template <class T>
Grid<T> degrade(GridView<const T> band, const Kernel2D& kernel, int ratio) {
  detail::require(ratio >= 1, "degrade: ratio must be >= 1");
  const auto r = static_cast<std::size_t>(ratio);
  detail::require(band.width % r == 0 && band.height % r == 0,
                  "decimate: non-divisible dimensions");
  detail::require_kernel_fits(band, kernel);
  const auto& factor = kernel.separable_factor();
  if (!factor) {
    const auto full = convolve_reflect(band, kernel);
    return decimate(full.view(), ratio);
  }
  const auto rows = detail::iota_indices(band.height / r, r, r / 2);
  const auto cols = detail::iota_indices(band.width / r, r, r / 2);
  return detail::separable_filter_at(band, std::span<const double>(*factor), rows, cols);
}

template <class T>
Grid<T> degrade(GridView<const T> band, const MtfSpec& spec) {
  return degrade(band, mtf_gaussian_kernel(spec), spec.ratio);
}

namespace detail {

struct CubicTaps {
  std::array<std::size_t, 4> index;
  std::array<double, 4> weight;
};

// Catmull-Rom taps for every output coordinate of a 1-D axis of length n
// upsampled by `ratio`. Output pixel p sits at input coordinate
// (p - floor(ratio/2)) / ratio, so decimate() recovers the input grid.
inline std::vector<CubicTaps> catmull_rom_taps(std::size_t n, int ratio) {
  const auto r = static_cast<std::ptrdiff_t>(ratio);
  const std::ptrdiff_t off = r / 2;
  std::vector<CubicTaps> taps(n * static_cast<std::size_t>(ratio));
  for (std::size_t p = 0; p < taps.size(); ++p) {
    const std::ptrdiff_t num = static_cast<std::ptrdiff_t>(p) - off;
    // floor division for negative numerators
    std::ptrdiff_t i0 = num / r;
    if (num % r != 0 && num < 0) --i0;
    const double t = static_cast<double>(num - i0 * r) / static_cast<double>(r);
    const double t2 = t * t;
    const double t3 = t2 * t;
    auto& tap = taps[p];
    tap.weight = {0.5 * (-t3 + 2.0 * t2 - t), 0.5 * (3.0 * t3 - 5.0 * t2 + 2.0),
                  0.5 * (-3.0 * t3 + 4.0 * t2 + t), 0.5 * (t3 - t2)};
    for (std::ptrdiff_t k = 0; k < 4; ++k)
      tap.index[static_cast<std::size_t>(k)] = reflect_index(i0 - 1 + k, n);
  }
  return taps;
}

}  // namespace detail

/// Bicubic (Catmull-Rom) upsampling by an integer ratio with mirrored
/// boundaries.
template <class T>
Grid<T> upsample_interp(GridView<const T> band, int ratio) {
  detail::require(ratio >= 1, "upsample: ratio must be >= 1");
  const auto r = static_cast<std::size_t>(ratio);
  const auto col_taps = detail::catmull_rom_taps(band.width, ratio);
  const auto row_taps = detail::catmull_rom_taps(band.height, ratio);
  const std::size_t out_w = band.width * r;
  const std::size_t out_h = band.height * r;

  std::vector<double> tmp(band.height * out_w);
  for (std::size_t y = 0; y < band.height; ++y) {
    for (std::size_t x = 0; x < out_w; ++x) {
      const auto& tap = col_taps[x];
      double acc = 0.0;
      for (std::size_t k = 0; k < 4; ++k)
        acc += tap.weight[k] * static_cast<double>(band(y, tap.index[k]));
      tmp[y * out_w + x] = acc;
    }
  }
  Grid<T> out(out_w, out_h);
  for (std::size_t y = 0; y < out_h; ++y) {
    const auto& tap = row_taps[y];
    for (std::size_t x = 0; x < out_w; ++x) {
      double acc = 0.0;
      for (std::size_t k = 0; k < 4; ++k) acc += tap.weight[k] * tmp[tap.index[k] * out_w + x];
      out(y, x) = static_cast<T>(acc);
    }
  }
  return out;
}

}  // namespace hspan
