#pragma once

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>
#include <vector>

#include "hspan/core/types.hpp"
#include "hspan/raster/kernel.hpp"
#include "hspan/raster/resample.hpp"

namespace hspan {

/// A fused cube: HS band count and wavelengths on the PAN grid.
using FusedCube = HyperCube;

/// Inputs of one pansharpening call. Holds references; the caller keeps the
/// rasters alive for the duration of the call.
struct SharpenRequest {
  const PanImage& pan;
  const HyperCube& hs;
  int ratio = 6;
  // Used by methods that need a degraded PAN (GSA).
  MtfSpec mtf{};

  void validate() const {
    detail::require(ratio >= 1, "sharpen: ratio must be >= 1");
    const auto r = static_cast<std::size_t>(ratio);
    detail::require(pan.width() == r * hs.width() && pan.height() == r * hs.height(),
                    "sharpen: pan dimensions != ratio * hs dimensions");
  }

  MtfSpec mtf_for_ratio() const {
    MtfSpec s = mtf;
    s.ratio = ratio;
    return s;
  }
};

/// Geometry a fused result must have for a given request.
struct FusedGeometry {
  std::size_t width = 0;
  std::size_t height = 0;
  std::size_t bands = 0;
  double gsd = 0.0;
  std::vector<double> wavelengths;

  static FusedGeometry of(const PanImage& pan, const HyperCube& hs) {
    return {pan.width(), pan.height(), hs.bands(), pan.meta().gsd, hs.meta().wavelengths};
  }
  static FusedGeometry of(const SharpenRequest& req) { return of(req.pan, req.hs); }

  RasterMeta meta(const RasterMeta& hs_meta) const {
    RasterMeta m = hs_meta;
    m.width = width;
    m.height = height;
    m.gsd = gsd;
    m.nodata.reset();
    return m;
  }
};

namespace detail {

inline std::vector<Grid<float>> upsample_bands(const HyperCube& hs, int ratio) {
  std::vector<Grid<float>> out;
  out.reserve(hs.bands());
  for (std::size_t b = 0; b < hs.bands(); ++b) out.push_back(upsample_interp(hs.band(b), ratio));
  return out;
}

inline std::string fmt_number(double v) {
  std::ostringstream os;
  os << v;
  return os.str();
}

}  // namespace detail

/// Lists every field where `cube` differs from `expected`; empty when it
/// matches.
inline std::vector<std::string> geometry_mismatches(const RasterMeta& meta,
                                                    const FusedGeometry& expected) {
  std::vector<std::string> out;
  auto check = [&](const char* name, double got, double want) {
    if (got != want)
      out.push_back(std::string(name) + ": " + detail::fmt_number(got) + " != " +
                    detail::fmt_number(want));
  };
  check("width", static_cast<double>(meta.width), static_cast<double>(expected.width));
  check("height", static_cast<double>(meta.height), static_cast<double>(expected.height));
  check("bands", static_cast<double>(meta.bands), static_cast<double>(expected.bands));
  if (!detail::gsd_equal(meta.gsd, expected.gsd))
    out.push_back("gsd: " + detail::fmt_number(meta.gsd) + " != " +
                  detail::fmt_number(expected.gsd));
  if (meta.bands == expected.bands) {
    for (std::size_t b = 0; b < meta.bands; ++b) {
      if (std::abs(meta.wavelengths[b] - expected.wavelengths[b]) > 1e-6) {
        out.push_back("wavelengths[" + std::to_string(b) + "]: " +
                      detail::fmt_number(meta.wavelengths[b]) + " != " +
                      detail::fmt_number(expected.wavelengths[b]));
        break;
      }
    }
  }
  return out;
}

/// Copy of `cube` with negative samples set to zero. Applied only when
/// exporting; metrics always see the raw fusion result.
inline HyperCube clamp_negative(const HyperCube& cube) {
  std::vector<float> s(cube.samples().begin(), cube.samples().end());
  for (float& v : s) v = std::max(v, 0.0f);
  return HyperCube(cube.meta(), std::move(s));
}

}  // namespace hspan
