#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <vector>

#include "hspan/core/types.hpp"
#include "hspan/metrics/no_reference.hpp"

namespace hspan {

/// Pixel rectangle: top-left corner (x, y), width, height.
struct Roi {
  std::size_t x = 0;
  std::size_t y = 0;
  std::size_t width = 0;
  std::size_t height = 0;
};

/// Per-band mean reflectance over `roi`.
inline std::vector<double> extract_signature(const HyperCube& cube, const Roi& roi) {
  detail::require(roi.width > 0 && roi.height > 0, "signature: empty roi");
  detail::require(roi.x + roi.width <= cube.width() && roi.y + roi.height <= cube.height(),
                  "signature: roi outside cube");
  std::vector<double> sig(cube.bands());
  for (std::size_t b = 0; b < cube.bands(); ++b) {
    const auto band = cube.band(b);
    double sum = 0.0;
    for (std::size_t r = 0; r < roi.height; ++r)
      for (std::size_t c = 0; c < roi.width; ++c) sum += band(roi.y + r, roi.x + c);
    sig[b] = sum / static_cast<double>(roi.width * roi.height);
  }
  return sig;
}

struct SignatureDifference {
  std::vector<double> mean_abs;                 // per band
  std::vector<std::optional<double>> normalized;  // divided by reference range; nullopt if flat
};

/// Per-band mean absolute difference between a fused cube and a reference.
/// A fused cube at `spec.ratio` times the reference size is first degraded
/// to the reference grid.
inline SignatureDifference signature_difference(const HyperCube& fused, const HyperCube& reference,
                                                const MtfSpec& spec = {}) {
  detail::require(fused.bands() == reference.bands(), "signature_difference: band count mismatch");
  const auto r = static_cast<std::size_t>(spec.ratio);
  std::optional<HyperCube> degraded;
  if (fused.width() != reference.width() || fused.height() != reference.height()) {
    detail::require(fused.width() == r * reference.width() && fused.height() == r * reference.height(),
                    "signature_difference: fused is neither reference-sized nor ratio times larger");
    degraded = degrade_cube(fused, spec);
  }
  const HyperCube& x = degraded ? *degraded : fused;

  SignatureDifference out;
  for (std::size_t b = 0; b < x.bands(); ++b) {
    const auto xb = x.band(b).data;
    const auto yb = reference.band(b).data;
    double sum = 0.0;
    for (std::size_t i = 0; i < xb.size(); ++i)
      sum += std::abs(static_cast<double>(xb[i]) - static_cast<double>(yb[i]));
    const double mad = sum / static_cast<double>(xb.size());
    out.mean_abs.push_back(mad);
    const auto [lo, hi] = std::minmax_element(yb.begin(), yb.end());
    const double range = static_cast<double>(*hi) - static_cast<double>(*lo);
    out.normalized.push_back(range > 0.0 ? std::optional<double>(mad / range) : std::nullopt);
  }
  return out;
}

}  // namespace hspan
