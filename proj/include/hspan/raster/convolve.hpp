#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "hspan/core/grid.hpp"
#include "hspan/raster/kernel.hpp"

namespace hspan {
namespace detail {

// Filters row `row` of `in` with the 1-D `factor` at column `col`
// (true convolution, mirrored boundary).
template <class T>
double filter_row_at(GridView<const T> in, std::span<const double> factor,
                     std::size_t row, std::size_t col) {
  const auto radius = static_cast<std::ptrdiff_t>(factor.size() / 2);
  const auto c = static_cast<std::ptrdiff_t>(col);
  const T* line = in.data.data() + row * in.width;
  double acc = 0.0;
  if (c - radius >= 0 && c + radius < static_cast<std::ptrdiff_t>(in.width)) {
    const T* p = line + (c + radius);
    for (std::size_t j = 0; j < factor.size(); ++j) acc += factor[j] * static_cast<double>(p[-static_cast<std::ptrdiff_t>(j)]);
  } else {
    for (std::size_t j = 0; j < factor.size(); ++j) {
      const auto idx = reflect_index(c + radius - static_cast<std::ptrdiff_t>(j), in.width);
      acc += factor[j] * static_cast<double>(line[idx]);
    }
  }
  return acc;
}

// Filters column `col` of `tmp` (row-major, `width` wide, `height` tall) at
// row `row`.
inline double filter_col_at(std::span<const double> tmp, std::size_t width, std::size_t height,
                            std::span<const double> factor, std::size_t row, std::size_t col) {
  const auto radius = static_cast<std::ptrdiff_t>(factor.size() / 2);
  const auto r = static_cast<std::ptrdiff_t>(row);
  double acc = 0.0;
  for (std::size_t i = 0; i < factor.size(); ++i) {
    const auto idx = reflect_index(r + radius - static_cast<std::ptrdiff_t>(i), height);
    acc += factor[i] * tmp[idx * width + col];
  }
  return acc;
}

template <class T>
void require_kernel_fits(GridView<const T> band, const Kernel2D& kernel) {
  require(band.width >= kernel.radius() && band.height >= kernel.radius(),
          "convolve: band smaller than kernel radius");
}

// Separable filtering evaluated only at the listed output rows/columns.
// Every output sample is computed with the same arithmetic regardless of
// which subset is requested.
template <class T>
Grid<T> separable_filter_at(GridView<const T> in, std::span<const double> factor,
                            std::span<const std::size_t> rows, std::span<const std::size_t> cols) {
  std::vector<double> tmp(in.height * cols.size());
  for (std::size_t r = 0; r < in.height; ++r)
    for (std::size_t c = 0; c < cols.size(); ++c)
      tmp[r * cols.size() + c] = filter_row_at(in, factor, r, cols[c]);
  Grid<T> out(cols.size(), rows.size());
  for (std::size_t r = 0; r < rows.size(); ++r)
    for (std::size_t c = 0; c < cols.size(); ++c)
      out(r, c) = static_cast<T>(filter_col_at(tmp, cols.size(), in.height, factor, rows[r], c));
  return out;
}

inline std::vector<std::size_t> iota_indices(std::size_t n, std::size_t step = 1,
                                             std::size_t offset = 0) {
  std::vector<std::size_t> idx;
  idx.reserve(n);
  for (std::size_t i = 0; i < n; ++i) idx.push_back(i * step + offset);
  return idx;
}

}  // namespace detail

/// Same-size convolution with mirrored boundaries.
template <class T>
Grid<T> convolve_reflect(GridView<const T> band, const Kernel2D& kernel) {
  detail::require_kernel_fits(band, kernel);
  if (const auto& f = kernel.separable_factor()) {
    const auto rows = detail::iota_indices(band.height);
    const auto cols = detail::iota_indices(band.width);
    return detail::separable_filter_at(band, std::span<const double>(*f), rows, cols);
  }

  // Mirror-pad once so the inner loops run without boundary checks; the
  // summation order matches the direct definition.
  const auto radius = static_cast<std::ptrdiff_t>(kernel.radius());
  const std::size_t size = kernel.size();
  const std::size_t pw = band.width + size - 1;
  std::vector<double> padded(pw * (band.height + size - 1));
  for (std::size_t r = 0; r < band.height + size - 1; ++r) {
    const auto rr = reflect_index(static_cast<std::ptrdiff_t>(r) - radius, band.height);
    for (std::size_t c = 0; c < pw; ++c)
      padded[r * pw + c] =
          static_cast<double>(band(rr, reflect_index(static_cast<std::ptrdiff_t>(c) - radius, band.width)));
  }
  Grid<T> out(band.width, band.height);
  for (std::size_t r = 0; r < band.height; ++r) {
    for (std::size_t c = 0; c < band.width; ++c) {
      double acc = 0.0;
      for (std::size_t i = 0; i < size; ++i) {
        const double* p = padded.data() + (r + size - 1 - i) * pw + (c + size - 1);
        for (std::size_t j = 0; j < size; ++j) acc += kernel(i, j) * p[-static_cast<std::ptrdiff_t>(j)];
      }
      out(r, c) = static_cast<T>(acc);
    }
  }
  return out;
}

}  // namespace hspan
