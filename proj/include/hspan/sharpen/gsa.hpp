#pragma once

#include <vector>

#include <Eigen/Dense>

#include "hspan/raster/histogram.hpp"
#include "hspan/raster/lstsq.hpp"
#include "hspan/raster/resample.hpp"
#include "hspan/raster/stats.hpp"
#include "hspan/sharpen/request.hpp"

namespace hspan {

struct GsaComponents {
  std::vector<Grid<float>> upsampled;
  // One weight per band, intercept last.
  Eigen::VectorXd weights;
  Grid<double> intensity;
};

/// Regresses the MTF-degraded PAN on the low-resolution bands (plus
/// intercept) and synthesizes the intensity from the upsampled bands with
/// those weights.
inline GsaComponents gsa_components(const SharpenRequest& req) {
  req.validate();
  const HyperCube& hs = req.hs;
  const auto bands = static_cast<Eigen::Index>(hs.bands());
  const auto pan_lo = degrade(req.pan.view(), req.mtf_for_ratio());

  std::vector<GridView<const float>> lo_bands;
  for (std::size_t b = 0; b < hs.bands(); ++b) lo_bands.push_back(hs.band(b));

  GsaComponents c;
  c.weights = regress_on_bands<float, float>(lo_bands, pan_lo.view()).coefficients;
  c.upsampled = detail::upsample_bands(hs, req.ratio);

  c.intensity = Grid<double>(req.pan.width(), req.pan.height(), c.weights[bands]);
  auto& in = c.intensity.samples();
  for (Eigen::Index b = 0; b < bands; ++b) {
    const double w = c.weights[b];
    const auto& s = c.upsampled[static_cast<std::size_t>(b)].samples();
    for (std::size_t i = 0; i < in.size(); ++i) in[i] += w * static_cast<double>(s[i]);
  }
  return c;
}

/// Detail injection: band_k + g_k * (pan_matched - intensity), with global
/// gains g_k = cov(band_k, I) / var(I).
inline FusedCube gsa_inject(const RasterMeta& fused_meta, const std::vector<Grid<float>>& upsampled,
                            const Grid<double>& intensity, const Grid<double>& pan_matched) {
  detail::require(pan_matched.width() == intensity.width() &&
                      pan_matched.height() == intensity.height(),
                  "gsa: pan/intensity size mismatch");
  const Moments mi = moments<double>(intensity.samples());
  if (!(mi.variance > 0.0)) throw DegenerateError("gsa: degenerate intensity");

  std::vector<Grid<float>> out;
  out.reserve(upsampled.size());
  const auto& iv = intensity.samples();
  const auto& pv = pan_matched.samples();
  for (const auto& band : upsampled) {
    const auto& s = band.samples();
    const double mb = moments<float>(s).mean;
    const double gain =
        covariance(std::span<const float>(s), std::span<const double>(iv), mb, mi.mean) /
        mi.variance;
    Grid<float> fused(band.width(), band.height());
    auto& dst = fused.samples();
    for (std::size_t i = 0; i < dst.size(); ++i)
      dst[i] = static_cast<float>(static_cast<double>(s[i]) + gain * (pv[i] - iv[i]));
    out.push_back(std::move(fused));
  }
  return HyperCube::from_bands(fused_meta, out);
}

inline FusedCube sharpen_gsa(const SharpenRequest& req) {
  const auto c = gsa_components(req);
  const Moments mi = moments<double>(c.intensity.samples());
  if (!(mi.variance > 0.0)) throw DegenerateError("gsa: degenerate intensity");
  const auto pan = grid_cast<double>(req.pan.view());
  const auto matched = histogram_match_linear(pan.view(), mi.mean, mi.stddev());
  return gsa_inject(FusedGeometry::of(req).meta(req.hs.meta()), c.upsampled, c.intensity, matched);
}

}  // namespace hspan
