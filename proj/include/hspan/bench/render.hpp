#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <optional>
#include <vector>

#include <png.h>

#include "hspan/bench/signature.hpp"
#include "hspan/core/spectral.hpp"
#include "hspan/core/types.hpp"

namespace hspan {

/// Interleaved 8-bit RGB raster.
struct RgbImage {
  std::size_t width = 0;
  std::size_t height = 0;
  std::vector<std::uint8_t> pixels;

  std::uint8_t channel(std::size_t row, std::size_t col, std::size_t c) const {
    return pixels[(row * width + col) * 3 + c];
  }
};

/// Linear stretch limits as percentiles of the band histogram.
struct Stretch {
  double lo = 1.0;
  double hi = 99.0;
};

/// Nearest-rank percentile: the value at rank ceil(p/100 * n), 1-based,
/// clamped to [1, n].
inline double percentile_nearest_rank(std::vector<float> values, double p) {
  detail::require(!values.empty(), "percentile: empty input");
  const auto n = static_cast<double>(values.size());
  auto rank = static_cast<std::size_t>(std::ceil(p / 100.0 * n));
  rank = std::clamp<std::size_t>(rank, 1, values.size());
  std::nth_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(rank - 1), values.end());
  return values[rank - 1];
}

/// Maps three bands (nearest to the requested wavelengths, in R, G, B order)
/// to 8 bits with a per-channel percentile stretch. A channel whose two
/// percentiles coincide is rendered as 0.
inline RgbImage render(const HyperCube& cube, const std::array<double, 3>& wavelengths,
                       Stretch stretch = {}, std::optional<Roi> roi = std::nullopt) {
  detail::require(stretch.lo < stretch.hi, "render: stretch percentiles must satisfy lo < hi");
  const Roi area = roi.value_or(Roi{0, 0, cube.width(), cube.height()});
  detail::require(area.width > 0 && area.height > 0 && area.x + area.width <= cube.width() &&
                      area.y + area.height <= cube.height(),
                  "render: roi outside cube");

  RgbImage img{area.width, area.height, std::vector<std::uint8_t>(area.width * area.height * 3, 0)};
  for (std::size_t c = 0; c < 3; ++c) {
    const auto band = cube.band(band_at_wavelength(cube, wavelengths[c]));
    std::vector<float> values;
    values.reserve(area.width * area.height);
    for (std::size_t r = 0; r < area.height; ++r)
      for (std::size_t x = 0; x < area.width; ++x) values.push_back(band(area.y + r, area.x + x));
    const double lo = percentile_nearest_rank(values, stretch.lo);
    const double hi = percentile_nearest_rank(values, stretch.hi);
    if (hi <= lo) continue;
    for (std::size_t i = 0; i < values.size(); ++i) {
      const double t = std::clamp((static_cast<double>(values[i]) - lo) / (hi - lo), 0.0, 1.0);
      img.pixels[i * 3 + c] = static_cast<std::uint8_t>(std::lround(t * 255.0));
    }
  }
  return img;
}

inline void write_png(const RgbImage& img, const std::filesystem::path& path) {
  FILE* fp = std::fopen(path.string().c_str(), "wb");
  if (!fp) throw IoError("cannot write " + path.string());
  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  png_infop info = png ? png_create_info_struct(png) : nullptr;
  if (!png || !info || setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    std::fclose(fp);
    throw IoError("png encoding failed for " + path.string());
  }
  png_init_io(png, fp);
  png_set_IHDR(png, info, static_cast<png_uint_32>(img.width), static_cast<png_uint_32>(img.height),
               8, PNG_COLOR_TYPE_RGB, PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT,
               PNG_FILTER_TYPE_DEFAULT);
  png_write_info(png, info);
  for (std::size_t r = 0; r < img.height; ++r)
    png_write_row(png, const_cast<png_bytep>(img.pixels.data() + r * img.width * 3));
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
  std::fclose(fp);
}

}  // namespace hspan
