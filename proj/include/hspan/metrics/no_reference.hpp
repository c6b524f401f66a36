#pragma once

// Full-resolution (no-reference) indices: D_lambda, D_s and QNR.

#include <cmath>
#include <vector>

#include "hspan/core/types.hpp"
#include "hspan/metrics/reference.hpp"
#include "hspan/raster/lstsq.hpp"
#include "hspan/raster/resample.hpp"

namespace hspan {

/// Fused cube degraded band by band to the HS input grid.
inline HyperCube degrade_cube(const HyperCube& fused, const MtfSpec& spec) {
  const Kernel2D kernel = mtf_gaussian_kernel(spec);
  std::vector<Grid<float>> bands;
  bands.reserve(fused.bands());
  for (std::size_t b = 0; b < fused.bands(); ++b)
    bands.push_back(degrade(fused.band(b), kernel, spec.ratio));
  RasterMeta meta = fused.meta();
  meta.width = bands.front().width();
  meta.height = bands.front().height();
  meta.gsd = fused.meta().gsd * spec.ratio;
  return HyperCube::from_bands(std::move(meta), bands);
}

/// Spectral distortion: 1 - q_avg(degrade(fused), hs_input).
inline double d_lambda(const HyperCube& fused, const HyperCube& hs_input, const MtfSpec& spec,
                       UqiOptions opt = {}) {
  const auto r = static_cast<std::size_t>(spec.ratio);
  detail::require(fused.width() == r * hs_input.width() && fused.height() == r * hs_input.height(),
                  "d_lambda: fused dimensions != ratio * hs dimensions");
  detail::require(fused.bands() == hs_input.bands(), "d_lambda: band count mismatch");
  return 1.0 - q_avg(degrade_cube(fused, spec), hs_input, opt);
}

/// Spatial distortion: 1 - R^2 of PAN regressed on the fused bands plus an
/// intercept.
inline double d_s(const HyperCube& fused, const PanImage& pan) {
  detail::require(fused.width() == pan.width() && fused.height() == pan.height(),
                  "d_s: fused and pan dimensions differ");
  std::vector<GridView<const float>> bands;
  bands.reserve(fused.bands());
  for (std::size_t b = 0; b < fused.bands(); ++b) bands.push_back(fused.band(b));
  const auto fit = regress_on_bands<float, float>(bands, pan.view());
  if (fit.degenerate) throw DegenerateError("d_s: constant PAN, R^2 undefined");
  return 1.0 - fit.r_squared;
}

/// Values outside [0,1] are propagated, not clamped.
inline double qnr(double d_lambda, double d_s, double alpha = 1.0, double beta = 1.0) {
  return std::pow(1.0 - d_lambda, alpha) * std::pow(1.0 - d_s, beta);
}

}  // namespace hspan
